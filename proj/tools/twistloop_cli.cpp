#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "twistloop/bundle.hpp"
#include "twistloop/errors.hpp"
#include "twistloop/geometry.hpp"
#include "twistloop/oneloop.hpp"
#include "twistloop/pipeline.hpp"
#include "twistloop/ptolemy.hpp"
#include "twistloop/report.hpp"

using namespace twistloop;

namespace {

enum Exit { kOk = 0, kInput = 1, kNumeric = 2, kMismatch = 3 };

struct Flags {
    std::string format = "text";
    double tol_newton = 1e-12;
    double tol_compare = 1e-8;
    int max_restarts = 16;
    std::uint64_t seed = 20240611;
    double radius = 1.0;
    std::string output;
};

VerifyOptions options(const Flags& f) {
    VerifyOptions o;
    o.solver.tolerance = f.tol_newton;
    o.solver.max_restarts = f.max_restarts;
    o.solver.rng_seed = f.seed;
    o.det.radius = f.radius;
    o.tol_compare = f.tol_compare;
    return o;
}

std::string num(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

std::string cplx_str(cplx z, int precision = 12) {
    std::ostringstream os;
    os << std::setprecision(precision) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

void emit_json(const json& j) { std::cout << j.dump(2) << "\n"; }

json word_json(const RLWord& w) {
    return {{"input", w.input}, {"word", w.letters}, {"rotation", w.rotation}, {"N", w.size()}, {"blocks", w.blocks}};
}

void print_word(const RLWord& w) {
    std::cout << "word " << w.letters << " (input " << w.input << ", rotation " << w.rotation << "), N = " << w.size()
              << "\n";
}

int cmd_solve(const std::string& text, const Flags& f) {
    const RLWord w = parse_word(text);
    const ShapeSolution s = solve_geometric(w, options(f).solver);
    if (f.format == "json") {
        json j = word_json(w);
        j["shapes"] = cplx_list_to_json(s.z);
        j["volume"] = s.volume;
        j["residual"] = s.residual;
        j["iterations"] = s.iterations;
        j["candidate"] = s.candidate;
        j["converged_candidates"] = s.converged_candidates;
        emit_json(j);
    } else if (f.format == "csv") {
        std::cout << "tetrahedron,re,im,bloch_wigner\n";
        for (size_t k = 0; k < s.z.size(); ++k)
            std::cout << k + 1 << ',' << num(s.z[k].real()) << ',' << num(s.z[k].imag()) << ','
                      << num(bloch_wigner(s.z[k])) << "\n";
    } else {
        print_word(w);
        for (size_t k = 0; k < s.z.size(); ++k) std::cout << "z" << k + 1 << " = " << cplx_str(s.z[k]) << "\n";
        std::cout << "volume = " << std::setprecision(12) << s.volume << "\nresidual = " << std::setprecision(3)
                  << s.residual << " (" << s.iterations << " Newton iterations, start " << s.candidate << ")\n";
    }
    return kOk;
}

void emit_one_loop(const RLWord* w, const OneLoopResult& r, const Flags& f, const json& extra = json::object()) {
    if (f.format == "json") {
        json j = w ? word_json(*w) : json::object();
        j.update(one_loop_to_json(r));
        j.update(extra);
        emit_json(j);
    } else if (f.format == "csv") {
        std::cout << "which,exponent,re,im\n";
        for (const auto& [name, p] : {std::pair{"raw", &r.tau}, std::pair{"normalized", &r.tau_normalized}})
            for (const auto& [e, a] : p->coeffs())
                std::cout << name << ',' << e << ',' << num(a.real()) << ',' << num(a.imag()) << "\n";
    } else {
        if (w) print_word(*w);
        std::cout << "route " << route_name(r.route) << "\n";
        std::cout << "tau            = " << poly_to_text(r.tau) << "\n";
        std::cout << "tau normalized = " << poly_to_text(r.tau_normalized) << "\n";
        for (const auto& [k, v] : extra.items()) std::cout << k << " = " << v.dump() << "\n";
    }
    for (const auto& warn : r.warnings) std::cerr << "warning: " << warn << "\n";
}

int cmd_one_loop(const std::string& text, const Flags& f) {
    const RLWord w = parse_word(text);
    const VerifyOptions o = options(f);
    const ShapeSolution s = solve_geometric(w, o.solver);
    emit_one_loop(&w, one_loop_det_x(w, s, o.det), f);
    return kOk;
}

int cmd_big_jacobian(const std::string& text, const Flags& f) {
    const RLWord w = parse_word(text);
    const VerifyOptions o = options(f);
    const ShapeSolution s = solve_geometric(w, o.solver);
    const PtolemyAssignment p = solve_ptolemy(w, s, o.solver);
    const OneLoopResult r = one_loop_big_jacobian(w, p, o.det);
    emit_one_loop(&w, r, f, {{"derivative_at_1", cplx_to_json(lp_derivative(r.tau, 1.0))}});
    return kOk;
}

int cmd_alexander(const std::string& text, const Flags& f) {
    const RLWord w = parse_word(text);
    const VerifyOptions o = options(f);
    const ShapeSolution s = solve_geometric(w, o.solver);
    const PtolemyAssignment p = solve_ptolemy(w, s, o.solver);
    const AlexanderResult a = alexander_polynomial(w, p);
    const int n = w.size();
    const CharacterCoords tr = character_coords(p.c[n], p.c[n + 1], p.c[n + 2]);
    const LaurentPoly tau_n = normalize_unit(a.tau);
    if (f.format == "json") {
        json j = word_json(w);
        json jac = json::array();
        for (int r = 0; r < 3; ++r) {
            json row = json::array();
            for (int c = 0; c < 3; ++c) row.push_back(cplx_to_json(a.jacobian(r, c)));
            jac.push_back(row);
        }
        json branches = json::array();
        for (const auto& b : p.branches)
            branches.push_back({{"sign_r", b.sign_r},
                                {"sign_z", b.sign_z},
                                {"closing_residual", b.closing_residual},
                                {"shape_residual", b.shape_residual},
                                {"accepted", b.accepted}});
        j.update({{"route", "C"},
                  {"tau", poly_to_json(a.tau)},
                  {"tau_normalized", poly_to_json(tau_n)},
                  {"normalization", kNormalization},
                  {"jacobian", jac},
                  {"det_J", cplx_to_json(a.det_j)},
                  {"det_J_lu", cplx_to_json(a.det_j_lu)},
                  {"det_I_minus_J", cplx_to_json(a.det_i_minus_j)},
                  {"eigenvalues", cplx_list_to_json({a.eigenvalues.begin(), a.eigenvalues.end()})},
                  {"ptolemy", cplx_list_to_json(p.c)},
                  {"ptolemy_branches", branches},
                  {"traces", cplx_list_to_json({tr.a, tr.b, tr.c})},
                  {"fricke_residual", fricke_residual(tr)}});
        emit_json(j);
    } else if (f.format == "csv") {
        std::cout << "which,exponent,re,im\n";
        for (const auto& [e, c] : tau_n.coeffs())
            std::cout << "normalized," << e << ',' << num(c.real()) << ',' << num(c.imag()) << "\n";
    } else {
        print_word(w);
        std::cout << "route C\ntau            = " << poly_to_text(a.tau) << "\ntau normalized = " << poly_to_text(tau_n)
                  << "\n";
        for (int k = 0; k < n + 3; ++k) std::cout << "c" << k + 1 << " = " << cplx_str(p.c[k]) << "\n";
        std::cout << "det J = " << cplx_str(a.det_j) << "\ndet(I - J) = " << cplx_str(a.det_i_minus_j) << "\n";
        std::cout << "traces (a, b, c) = (" << cplx_str(tr.a) << ", " << cplx_str(tr.b) << ", " << cplx_str(tr.c)
                  << ")\n";
    }
    return kOk;
}

int cmd_verify(const std::string& text, const Flags& f) {
    const ComparisonReport r = verify_word(parse_word(text), options(f));
    if (f.format == "json")
        emit_json(r);
    else if (f.format == "csv")
        std::cout << report_csv_header() << "\n" << report_csv_row(r) << "\n";
    else
        std::cout << report_text(r);
    return r.pass ? kOk : kMismatch;
}

int cmd_verify_batch(const std::string& path, const Flags& f) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::vector<std::string> words;
    for (std::string line; std::getline(in, line);) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos || line[b] == '#') continue;
        const auto e = line.find_last_not_of(" \t\r");
        words.push_back(line.substr(b, e - b + 1));
    }
    const auto entries = verify_batch(words, options(f));
    int worst = kOk;
    bool any_input = false, any_numeric = false, any_mismatch = false;
    for (const auto& e : entries) {
        any_input |= e.exit_class == kInput;
        any_numeric |= e.exit_class == kNumeric;
        any_mismatch |= e.exit_class == kMismatch;
    }
    worst = any_input ? kInput : any_numeric ? kNumeric : any_mismatch ? kMismatch : kOk;

    if (f.format == "json") {
        json arr = json::array();
        for (const auto& e : entries) {
            json j{{"text", e.text}, {"exit_class", e.exit_class}};
            if (e.ok)
                j["report"] = e.report;
            else
                j["error"] = e.error;
            arr.push_back(j);
        }
        emit_json(arr);
    } else if (f.format == "csv") {
        std::cout << "text," << report_csv_header() << ",error\n";
        for (const auto& e : entries)
            std::cout << e.text << ',' << (e.ok ? report_csv_row(e.report) : std::string(13, ',') + "false") << ','
                      << '"' << e.error << '"' << "\n";
    } else {
        int passed = 0;
        for (const auto& e : entries) {
            if (e.ok) {
                const auto& r = e.report;
                std::cout << (r.pass ? "PASS " : "FAIL ") << e.text << " -> " << r.word << "  dev(A,C')="
                          << std::setprecision(2) << r.a_vs_cbig.relative_deviation
                          << " dev(A,C)=" << r.a_vs_c.relative_deviation << " dev(C',C)=" << r.cbig_vs_c.relative_deviation
                          << "\n";
                passed += r.pass;
            } else {
                std::cout << "ERROR " << e.text << ": " << e.error << "\n";
            }
        }
        std::cout << passed << "/" << entries.size() << " words pass\n";
    }
    return worst;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
}

int cmd_general(const std::string& path, const Flags& f) {
    GeneralInput in;
    try {
        in = general_input_from_json(read_json_file(path));
    } catch (const json::exception& e) {
        throw InputError(std::string("schema violation: ") + e.what());
    }
    const FlatteningReport rep = validate_flattening(in.data);
    if (!rep.ok()) throw InputError(rep.message);
    const OneLoopResult r = one_loop_general(in.data, in.shapes, options(f).det);
    json extra = json::object();
    if (!rep.condition3.empty()) {
        json c3 = json::object();
        for (const auto& [name, v] : rep.condition3) c3[name] = v;
        extra["condition3"] = c3;
    }
    emit_one_loop(nullptr, r, f, extra);
    return kOk;
}

int cmd_export_general(const std::string& text, const Flags& f) {
    const RLWord w = parse_word(text);
    const ShapeSolution s = solve_geometric(w, options(f).solver);
    const json j = general_input_to_json({bundle_gluing_data(w), s.z});
    if (f.output.empty() || f.output == "-") {
        emit_json(j);
    } else {
        std::ofstream out(f.output);
        if (!out) throw InputError("cannot write " + f.output);
        out << j.dump(2) << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted 1-loop invariant of once-punctured torus bundles, computed three ways"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--format", f.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--tol-newton", f.tol_newton, "Newton residual tolerance")->check(CLI::PositiveNumber);
    app.add_option("--tol-compare", f.tol_compare, "Relative deviation allowed between routes")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--max-restarts", f.max_restarts, "Perturbed Newton restarts")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", f.seed, "Seed for restart perturbations");
    app.add_option("--radius", f.radius, "Radius of the interpolation circle")->check(CLI::PositiveNumber);

    std::string arg;
    int code = kOk;
    auto add = [&](const char* name, const char* help, const char* what, int (*fn)(const std::string&, const Flags&)) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option(what, arg)->required();
        sub->callback([&, fn] { code = fn(arg, f); });
        return sub;
    };
    add("solve", "Geometric shapes and volume", "word", cmd_solve);
    add("one-loop", "Route A: det X", "word", cmd_one_loop);
    add("alexander", "Route C: det(tI - J) of the monodromy Jacobian", "word", cmd_alexander);
    add("big-jacobian", "Route C': determinant of the Ptolemy Jacobian", "word", cmd_big_jacobian);
    add("verify", "Run all three routes and compare", "word", cmd_verify);
    add("verify-batch", "Verify every word in a file (one per line)", "file", cmd_verify_batch);
    add("general", "Twisted 1-loop invariant from a JSON gluing-data file", "file", cmd_general);
    auto* exp = add("export-general", "Write the bundle's gluing data and shapes as JSON", "word", cmd_export_general);
    exp->add_option("-o,--output", f.output, "Output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInput;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const DomainError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kNumeric;
    }
    return code;
}
