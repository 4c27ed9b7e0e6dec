#pragma once

#include "gabor/signal.hpp"

#include <filesystem>
#include <string>

namespace gabor {

// Window files ("WDF") are JSON objects
//   {"L": int, "a": int, "b": int, "data": [[re, im], ...]}
// with exactly L entries in "data".

std::string window_to_json(const GaborSystem& sys);

/// Throws FormatError on malformed JSON or a data length that differs from L,
/// ParameterError when the lattice itself is invalid.
GaborSystem window_from_json(const std::string& text);

void write_window(const std::filesystem::path& path, const GaborSystem& sys);
GaborSystem read_window(const std::filesystem::path& path);

} // namespace gabor
