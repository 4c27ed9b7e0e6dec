#include "cli.hpp"

#include "gabor/canonical.hpp"
#include "gabor/diagnostics.hpp"
#include "gabor/error.hpp"
#include "gabor/iterate.hpp"
#include "gabor/window_io.hpp"
#include "gabor/zak.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace gabor::cli {
namespace {

constexpr double kBackendAgreement = 1e-9;

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string redundancy_string(const LatticeParams& lat) {
    return std::to_string(lat.q) + "/" + std::to_string(lat.p);
}

/// Distance of the frame operator of h from the identity, from the ZZ spectrum.
double zz_tightness_residual(const GaborSystem& h) {
    const FrameBounds fb = zz_frame_bounds(h);
    return std::max(std::abs(fb.lower - 1.0), std::abs(fb.upper - 1.0));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw FormatError("failed writing '" + path + "'");
}

enum class MethodKind { Direct, Zak, Newton, InvSqrt };

struct Method {
    MethodKind kind;
    ScalingRule rule = ScalingRule::Norm;
    InvSqrtMethod inv_sqrt = InvSqrtMethod::Sherif;
};

const std::map<std::string, Method>& methods() {
    static const std::map<std::string, Method> table = {
        {"direct", {MethodKind::Direct}},
        {"zak", {MethodKind::Zak}},
        {"newton-norm", {MethodKind::Newton, ScalingRule::Norm}},
        {"newton-frob", {MethodKind::Newton, ScalingRule::Frobenius}},
        {"newton-opt", {MethodKind::Newton, ScalingRule::Optimal}},
        {"newton-raw", {MethodKind::Newton, ScalingRule::Unscaled}},
        {"sherif", {MethodKind::InvSqrt, ScalingRule::Norm, InvSqrtMethod::Sherif}},
        {"lakic", {MethodKind::InvSqrt, ScalingRule::Norm, InvSqrtMethod::Lakic}},
    };
    return table;
}

std::vector<std::string> method_names() {
    std::vector<std::string> names;
    for (const auto& [name, m] : methods()) names.push_back(name);
    return names;
}

Backend backend_or_default(const std::string& name, const LatticeParams& lat) {
    if (name.empty()) return default_backend(lat);
    const auto b = parse_backend(name);
    if (!b) throw ParameterError("unknown backend '" + name + "'");
    return *b;
}

/// Iterate with a trace; `reference` switches to test-mode errors.
IterationTrace run_iterative(const GaborSystem& sys, const Method& m, double tol, int max_iter, Backend backend,
                             const std::optional<ComplexSignal>& reference, ComplexSignal* window) {
    if (m.kind == MethodKind::Newton) {
        NewtonOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.backend = backend;
        o.reference = reference;
        NewtonResult res = newton_tight(sys, m.rule, o);
        if (window) *window = std::move(res.window);
        return std::move(res.trace);
    }
    TightViaInvSqrtOptions o;
    o.tol = tol;
    o.max_iter = max_iter;
    o.reference = reference;
    TightResult res = tight_via_inv_sqrt(sys, m.inv_sqrt, o);
    if (window) *window = std::move(res.window);
    return std::move(res.trace);
}

struct GenArgs {
    std::string kind = "gaussian";
    std::string amplitude = "unit";
    int L = 0, a = 0, b = 0;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_gen(const GenArgs& args, std::ostream& out) {
    const LatticeParams lat = make_lattice(args.L, args.a, args.b);
    ComplexSignal g;
    if (args.kind == "gaussian") {
        g = gaussian_window(lat, args.amplitude == "sampled" ? GaussianAmplitude::Sampled : GaussianAmplitude::UnitNorm);
    } else {
        g = random_window(lat, args.seed);
    }
    write_window(args.out, GaborSystem(std::move(g), lat));
    out << "wrote " << args.out << " kind=" << args.kind << ' ' << lat.describe() << '\n';
    return kOk;
}

struct BoundsArgs {
    std::string in;
    std::string backend;
};

int cmd_bounds(const BoundsArgs& args, std::ostream& out, std::ostream& err) {
    const GaborSystem sys = read_window(args.in);
    const LatticeParams& lat = sys.lattice();
    std::vector<std::pair<std::string, FrameBounds>> rows;
    if (args.backend.empty() || args.backend == "dense") {
        Eigen::VectorXd ev = dense_S(sys).eigenvalues();
        rows.emplace_back("dense", FrameBounds{std::max(0.0, ev[0]), ev[ev.size() - 1]});
    }
    if (args.backend.empty() || args.backend == "zz") rows.emplace_back("zz", zz_frame_bounds(sys));

    for (const auto& [name, fb] : rows) {
        out << "backend=" << name << " A=" << num(fb.lower) << " B=" << num(fb.upper)
            << " R=" << redundancy_string(lat) << " p/q=" << lat.p << '/' << lat.q << '\n';
    }
    if (rows.size() == 2) {
        const FrameBounds& d = rows[0].second;
        const FrameBounds& z = rows[1].second;
        const double scale = std::max(1.0, d.upper);
        if (std::abs(d.lower - z.lower) > kBackendAgreement * scale ||
            std::abs(d.upper - z.upper) > kBackendAgreement * scale) {
            err << "backends disagree: dense (" << num(d.lower) << ", " << num(d.upper) << ") vs zz (" << num(z.lower)
                << ", " << num(z.upper) << ")\n";
            return kBackendDisagreement;
        }
    }
    const FrameBounds& fb = rows.front().second;
    if (!fb.is_frame()) {
        err << "not a frame: A=" << num(fb.lower) << " B=" << num(fb.upper) << '\n';
        return kNotAFrame;
    }
    return kOk;
}

struct DualArgs {
    std::string in;
    std::string backend;
    std::string out;
};

int cmd_dual(const DualArgs& args, std::ostream& out) {
    const GaborSystem sys = read_window(args.in);
    const Backend backend = backend_or_default(args.backend, sys.lattice());
    const ComplexSignal dual = canonical_dual(sys, backend);
    const double residual = (zz_apply_phi(sys, dual, [](double s) { return s; }) - sys.window()).norm() /
                            sys.window().norm();
    if (!args.out.empty()) write_window(args.out, sys.with_window(dual));
    out << "backend=" << backend_name(backend) << " residual=" << num(residual) << '\n';
    return kOk;
}

struct TightArgs {
    std::string in;
    std::string method = "direct";
    std::string backend;
    double tol = 1e-14;
    int max_iter = 50;
    std::string out;
};

int cmd_tight(const TightArgs& args, std::ostream& out, std::ostream& err) {
    const GaborSystem sys = read_window(args.in);
    const LatticeParams& lat = sys.lattice();
    const Method& m = methods().at(args.method);
    const Backend backend = backend_or_default(args.backend, lat);

    ComplexSignal h;
    int iterations = 0;
    switch (m.kind) {
    case MethodKind::Direct: h = canonical_tight(sys, backend); break;
    case MethodKind::Zak:
        if (lat.p != 1) {
            err << "zak method needs integer oversampling (p = 1); lattice has p/q = " << lat.p << '/' << lat.q << '\n';
            return kZakNeedsIntegerOversampling;
        }
        h = zak_tight_integer(sys);
        break;
    case MethodKind::Newton:
    case MethodKind::InvSqrt: {
        const IterationTrace trace = run_iterative(sys, m, args.tol, args.max_iter, backend, std::nullopt, &h);
        iterations = trace.iterations();
        if (trace.status != TraceStatus::Converged) {
            err << args.method << " did not converge in " << iterations << " iterations\n";
            return kNoConvergence;
        }
        break;
    }
    }
    const double residual = zz_tightness_residual(sys.with_window(h));
    if (!args.out.empty()) write_window(args.out, sys.with_window(h));
    out << "method=" << args.method << " iterations=" << iterations << " residual=" << num(residual) << '\n';
    return kOk;
}

struct ConvergenceArgs {
    std::string in;
    std::vector<std::string> methods = {"newton-norm", "newton-frob", "newton-opt", "newton-raw", "sherif", "lakic"};
    std::string backend;
    double tol = 1e-14;
    int max_iter = 50;
    std::string csv;
};

int cmd_convergence(const ConvergenceArgs& args, std::ostream& out, std::ostream& err) {
    for (const auto& name : args.methods) {
        const auto it = methods().find(name);
        if (it == methods().end() || it->second.kind == MethodKind::Direct || it->second.kind == MethodKind::Zak) {
            err << "unknown iterative method '" << name << "'\n";
            return kBadParameters;
        }
    }
    const GaborSystem sys = read_window(args.in);
    const Backend backend = backend_or_default(args.backend, sys.lattice());
    const ComplexSignal reference = canonical_tight(sys, backend);

    std::ostringstream csv;
    for (const auto& name : args.methods) {
        const IterationTrace trace =
            run_iterative(sys, methods().at(name), args.tol, args.max_iter, backend, reference, nullptr);
        double order = std::numeric_limits<double>::quiet_NaN();
        try {
            order = convergence_order(trace);
        } catch (const ParameterError&) {
        }
        const char* status = trace.status == TraceStatus::Converged ? "converged" : "max_iterations";
        std::ostringstream head;
        head << "method=" << name << " order=" << num(order) << " iterations=" << trace.iterations()
             << " status=" << status;
        csv << "# " << head.str() << '\n';
        write_trace_csv(csv, trace);
        // the comment line already carries the summary when the CSV goes to stdout
        if (!args.csv.empty()) out << head.str() << '\n';
    }
    if (args.csv.empty()) {
        out << csv.str();
    } else {
        write_text(args.csv, csv.str());
    }
    return kOk;
}

struct VerifyArgs {
    std::uint64_t seed = 1;
    int instances = 5;
    std::string report;
    std::vector<std::string> check_tight;
};

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
    VerifyOptions opts;
    opts.seed = args.seed;
    opts.instances = args.instances;
    for (const auto& path : args.check_tight) opts.supplied_tight.push_back(read_window(path));

    const VerificationReport report = run_verification(opts);
    const std::string text = report.to_json().dump(2) + "\n";
    std::size_t failed = 0;
    for (const auto& c : report.checks) {
        if (!c.pass) {
            ++failed;
            err << "FAILED " << c.check_name << " seed=" << c.instance_seed << '\n';
        }
    }
    if (args.report.empty()) {
        out << text;
    } else {
        write_text(args.report, text);
        out << "checks=" << report.checks.size() << " failed=" << failed << '\n';
    }
    return report.pass() ? kOk : kVerifyFailed;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Canonical dual and tight windows for finite discrete Gabor frames", "gabortool"};
    app.require_subcommand(1);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "write a window file");
    gen_cmd->add_option("--kind", gen.kind, "gaussian or random")->check(CLI::IsMember({"gaussian", "random"}));
    gen_cmd->add_option("--amplitude", gen.amplitude, "gaussian amplitude: unit norm or sampled 2^{1/4} e^{-pi x^2}")
        ->check(CLI::IsMember({"unit", "sampled"}));
    gen_cmd->add_option("--L", gen.L, "signal length")->required();
    gen_cmd->add_option("--a", gen.a, "time step")->required();
    gen_cmd->add_option("--b", gen.b, "frequency step")->required();
    gen_cmd->add_option("--seed", gen.seed, "seed for --kind random");
    gen_cmd->add_option("--out", gen.out, "output window file")->required();

    BoundsArgs bounds;
    auto* bounds_cmd = app.add_subcommand("bounds", "print frame bounds");
    bounds_cmd->add_option("--in", bounds.in, "window file")->required();
    bounds_cmd->add_option("--backend", bounds.backend, "dense or zz (default: both, cross-checked)")
        ->check(CLI::IsMember({"dense", "zz"}));

    DualArgs dual;
    auto* dual_cmd = app.add_subcommand("dual", "canonical dual window");
    dual_cmd->add_option("--in", dual.in, "window file")->required();
    dual_cmd->add_option("--backend", dual.backend, "dense, zz or cg")->check(CLI::IsMember({"dense", "zz", "cg"}));
    dual_cmd->add_option("--out", dual.out, "output window file");

    TightArgs tight;
    auto* tight_cmd = app.add_subcommand("tight", "canonical tight window");
    tight_cmd->add_option("--in", tight.in, "window file")->required();
    tight_cmd->add_option("--method", tight.method, "computation method")->check(CLI::IsMember(method_names()));
    tight_cmd->add_option("--backend", tight.backend, "dense, zz or cg")->check(CLI::IsMember({"dense", "zz", "cg"}));
    tight_cmd->add_option("--tol", tight.tol, "stopping tolerance for iterative methods")
        ->check(CLI::PositiveNumber);
    tight_cmd->add_option("--max-iter", tight.max_iter, "iteration limit")->check(CLI::NonNegativeNumber);
    tight_cmd->add_option("--out", tight.out, "output window file");

    ConvergenceArgs conv;
    auto* conv_cmd = app.add_subcommand("convergence", "iteration traces as CSV");
    conv_cmd->add_option("--in", conv.in, "window file")->required();
    conv_cmd->add_option("--methods", conv.methods, "comma separated iterative methods")->delimiter(',');
    conv_cmd->add_option("--backend", conv.backend, "dense, zz or cg")->check(CLI::IsMember({"dense", "zz", "cg"}));
    conv_cmd->add_option("--tol", conv.tol, "stopping tolerance")->check(CLI::PositiveNumber);
    conv_cmd->add_option("--max-iter", conv.max_iter, "iteration limit")->check(CLI::NonNegativeNumber);
    conv_cmd->add_option("--csv", conv.csv, "CSV output (default: stdout)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suite");
    verify_cmd->add_option("--seed", verify.seed, "base seed");
    verify_cmd->add_option("--instances", verify.instances, "random instances")->check(CLI::NonNegativeNumber);
    verify_cmd->add_option("--report", verify.report, "JSON report (default: stdout)");
    verify_cmd->add_option("--check-tight", verify.check_tight, "window files that must be normalized tight")
        ->group("");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kBadParameters;
    }

    try {
        if (gen_cmd->parsed()) return cmd_gen(gen, out);
        if (bounds_cmd->parsed()) return cmd_bounds(bounds, out, err);
        if (dual_cmd->parsed()) return cmd_dual(dual, out);
        if (tight_cmd->parsed()) return cmd_tight(tight, out, err);
        if (conv_cmd->parsed()) return cmd_convergence(conv, out, err);
        if (verify_cmd->parsed()) return cmd_verify(verify, out, err);
    } catch (const NotAFrameError& e) {
        err << e.what() << ": A=" << num(e.lower()) << " B=" << num(e.upper()) << '\n';
        return kNotAFrame;
    } catch (const DomainError& e) {
        err << e.what() << '\n';
        return kNotAFrame;
    } catch (const ConvergenceError& e) {
        err << e.what() << " after " << e.iterations() << " iterations\n";
        return kNoConvergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kBadParameters;
    }
    return kBadParameters;
}

} // namespace gabor::cli
