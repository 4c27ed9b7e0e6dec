#include "gabor/window_io.hpp"

#include "gabor/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace gabor {

using json = nlohmann::json;

std::string window_to_json(const GaborSystem& sys) {
    const auto& lat = sys.lattice();
    json data = json::array();
    for (int t = 0; t < lat.L; ++t) {
        data.push_back({sys.window()[t].real(), sys.window()[t].imag()});
    }
    json doc = {{"L", lat.L}, {"a", lat.a}, {"b", lat.b}, {"data", std::move(data)}};
    return doc.dump() + "\n";
}

GaborSystem window_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("window file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw FormatError("window file must hold a JSON object");
    for (const char* key : {"L", "a", "b"}) {
        if (!doc.contains(key) || !doc[key].is_number_integer()) {
            throw FormatError(std::string("window file: missing integer field '") + key + "'");
        }
    }
    if (!doc.contains("data") || !doc["data"].is_array()) throw FormatError("window file: missing 'data' array");

    const auto lat = make_lattice(doc["L"].get<int>(), doc["a"].get<int>(), doc["b"].get<int>());
    const auto& data = doc["data"];
    if (data.size() != static_cast<std::size_t>(lat.L)) {
        throw FormatError("window file: data has " + std::to_string(data.size()) + " entries, expected L=" +
                          std::to_string(lat.L));
    }
    ComplexSignal g(lat.L);
    for (int t = 0; t < lat.L; ++t) {
        const auto& entry = data[static_cast<std::size_t>(t)];
        if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
            throw FormatError("window file: entry " + std::to_string(t) + " is not a [re, im] pair");
        }
        g[t] = cplx(entry[0].get<double>(), entry[1].get<double>());
    }
    return GaborSystem(std::move(g), lat);
}

void write_window(const std::filesystem::path& path, const GaborSystem& sys) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    out << window_to_json(sys);
    if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

GaborSystem read_window(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return window_from_json(buf.str());
}

} // namespace gabor
