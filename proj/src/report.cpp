#include "twistloop/report.hpp"

#include <iomanip>
#include <sstream>

#include "twistloop/errors.hpp"

namespace twistloop {

namespace {

json matrix_to_json(const LaurentMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.size(); ++j) {
            json entry = json::object();
            for (const auto& [e, a] : m(i, j).coeffs()) entry[std::to_string(e)] = static_cast<long>(std::lround(a.real()));
            row.push_back(entry);
        }
        rows.push_back(row);
    }
    return rows;
}

LaurentMatrix matrix_from_json(const json& j, int n, const char* name) {
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw InputError(std::string(name) + " must have N rows");
    LaurentMatrix m(n);
    for (int i = 0; i < n; ++i) {
        const json& row = j[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw InputError(std::string(name) + " row " + std::to_string(i + 1) + " must have N entries");
        for (int c = 0; c < n; ++c) {
            const json& entry = row[static_cast<size_t>(c)];
            if (!entry.is_object()) throw InputError(std::string(name) + " entries must be {exponent: integer} maps");
            for (const auto& [key, val] : entry.items()) {
                size_t used = 0;
                int e = 0;
                try {
                    e = std::stoi(key, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != key.size() || key.empty())
                    throw InputError(std::string(name) + ": bad exponent key '" + key + "'");
                if (!val.is_number_integer()) throw InputError(std::string(name) + ": coefficients must be integers");
                m(i, c).add_term(e, static_cast<double>(val.get<long>()));
            }
        }
    }
    return m;
}

std::vector<int> int_vector(const json& j, size_t n, const std::string& name) {
    if (!j.is_array() || j.size() != n) throw InputError(name + " must be an integer array of length N");
    std::vector<int> v;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw InputError(name + " must contain integers");
        v.push_back(x.get<int>());
    }
    return v;
}

std::string cplx_text(cplx z, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InputError("complex numbers must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cplx_list_to_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (cplx z : v) out.push_back(cplx_to_json(z));
    return out;
}

std::vector<cplx> cplx_list_from_json(const json& j) {
    if (!j.is_array()) throw InputError("expected an array of [re, im] pairs");
    std::vector<cplx> v;
    for (const auto& x : j) v.push_back(cplx_from_json(x));
    return v;
}

json poly_to_json(const LaurentPoly& p) {
    if (p.is_zero()) return {{"min_exponent", 0}, {"coefficients", json::array()}};
    return {{"min_exponent", p.min_exponent()}, {"coefficients", cplx_list_to_json(p.dense())}};
}

LaurentPoly poly_from_json(const json& j) {
    return LaurentPoly::from_dense(cplx_list_from_json(j.at("coefficients")), j.at("min_exponent").get<int>());
}

std::string poly_to_text(const LaurentPoly& p, int precision) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, a] : p.coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << "(" << cplx_text(a, precision) << ")";
        if (e == 1)
            os << " t";
        else if (e != 0)
            os << " t^" << e;
    }
    return os.str();
}

void to_json(json& j, const UnitAlignment& a) {
    j = {{"shift", a.shift}, {"sign", a.sign}, {"matched", a.matched}};
    if (std::isfinite(a.relative_deviation))
        j["relative_deviation"] = a.relative_deviation;
    else
        j["relative_deviation"] = nullptr;
}

void from_json(const json& j, UnitAlignment& a) {
    a.shift = j.at("shift").get<int>();
    a.sign = j.at("sign").get<int>();
    a.matched = j.at("matched").get<bool>();
    a.relative_deviation = j.at("relative_deviation").is_null() ? INFINITY : j.at("relative_deviation").get<double>();
}

void to_json(json& j, const ComparisonReport& r) {
    const auto& f = r.flags;
    j = json{{"input", r.input},
             {"word", r.word},
             {"rotation", r.rotation},
             {"N", r.n},
             {"blocks", r.blocks},
             {"shapes", cplx_list_to_json(r.shapes)},
             {"volume", r.volume},
             {"gluing_residual", r.gluing_residual},
             {"ptolemy", cplx_list_to_json(r.ptolemy)},
             {"traces", {cplx_to_json(r.traces.a), cplx_to_json(r.traces.b), cplx_to_json(r.traces.c)}},
             {"normalization", kNormalization},
             {"tau_A", poly_to_json(r.tau_a)},
             {"tau_Cbig", poly_to_json(r.tau_cbig)},
             {"tau_C", poly_to_json(r.tau_c)},
             {"alignments", {{"A_vs_Cbig", r.a_vs_cbig}, {"A_vs_C", r.a_vs_c}, {"Cbig_vs_C", r.cbig_vs_c}}},
             {"tau_at_one", cplx_to_json(r.tau_at_one)},
             {"anti_palindromic_deviation", r.anti_palindromic_deviation},
             {"det_J", cplx_to_json(r.det_j)},
             {"det_I_minus_J", cplx_to_json(r.det_i_minus_j)},
             {"fricke_residual", r.fricke_residual},
             {"ptolemy_shape_residual", r.ptolemy_shape_residual},
             {"flags",
              {{"tau_at_one", f.tau_at_one},
               {"anti_palindromic", f.anti_palindromic},
               {"det_J_one", f.det_j_one},
               {"eigenvalue_one", f.eigenvalue_one},
               {"fricke", f.fricke},
               {"tr_field_sanity", f.tr_field_sanity},
               {"gluing_residual", f.gluing_residual}}},
             {"tolerance", r.tolerance},
             {"pass", r.pass}};
}

void from_json(const json& j, ComparisonReport& r) {
    r.input = j.at("input").get<std::string>();
    r.word = j.at("word").get<std::string>();
    r.rotation = j.at("rotation").get<int>();
    r.n = j.at("N").get<int>();
    r.blocks = j.at("blocks").get<std::vector<int>>();
    r.shapes = cplx_list_from_json(j.at("shapes"));
    r.volume = j.at("volume").get<double>();
    r.gluing_residual = j.at("gluing_residual").get<double>();
    r.ptolemy = cplx_list_from_json(j.at("ptolemy"));
    const auto tr = cplx_list_from_json(j.at("traces"));
    r.traces = {tr.at(0), tr.at(1), tr.at(2)};
    r.tau_a = poly_from_json(j.at("tau_A"));
    r.tau_cbig = poly_from_json(j.at("tau_Cbig"));
    r.tau_c = poly_from_json(j.at("tau_C"));
    const json& al = j.at("alignments");
    r.a_vs_cbig = al.at("A_vs_Cbig").get<UnitAlignment>();
    r.a_vs_c = al.at("A_vs_C").get<UnitAlignment>();
    r.cbig_vs_c = al.at("Cbig_vs_C").get<UnitAlignment>();
    r.tau_at_one = cplx_from_json(j.at("tau_at_one"));
    r.anti_palindromic_deviation = j.at("anti_palindromic_deviation").get<double>();
    r.det_j = cplx_from_json(j.at("det_J"));
    r.det_i_minus_j = cplx_from_json(j.at("det_I_minus_J"));
    r.fricke_residual = j.at("fricke_residual").get<double>();
    r.ptolemy_shape_residual = j.at("ptolemy_shape_residual").get<double>();
    const json& f = j.at("flags");
    r.flags.tau_at_one = f.at("tau_at_one").get<bool>();
    r.flags.anti_palindromic = f.at("anti_palindromic").get<bool>();
    r.flags.det_j_one = f.at("det_J_one").get<bool>();
    r.flags.eigenvalue_one = f.at("eigenvalue_one").get<bool>();
    r.flags.fricke = f.at("fricke").get<bool>();
    r.flags.tr_field_sanity = f.at("tr_field_sanity").get<bool>();
    r.flags.gluing_residual = f.at("gluing_residual").get<bool>();
    r.tolerance = j.at("tolerance").get<double>();
    r.pass = j.at("pass").get<bool>();
}

std::string report_text(const ComparisonReport& r) {
    std::ostringstream os;
    os << "word " << r.word << " (input " << r.input << ", rotation " << r.rotation << "), N = " << r.n << "\n";
    os << "volume " << std::setprecision(12) << r.volume << ", gluing residual " << std::setprecision(3)
       << r.gluing_residual << "\n";
    os << "tau_A    = " << poly_to_text(r.tau_a) << "\n";
    os << "tau_Cbig = " << poly_to_text(r.tau_cbig) << "\n";
    os << "tau_C    = " << poly_to_text(r.tau_c) << "\n";
    auto al = [&os](const char* name, const UnitAlignment& a) {
        os << name << ": shift " << a.shift << ", sign " << (a.sign > 0 ? "+" : "-") << ", deviation "
           << std::setprecision(3) << a.relative_deviation << (a.matched ? " ok" : " MISMATCH") << "\n";
    };
    al("A vs C'", r.a_vs_cbig);
    al("A vs C ", r.a_vs_c);
    al("C' vs C", r.cbig_vs_c);
    const auto& f = r.flags;
    auto flag = [&os](const char* name, bool v) { os << "  " << name << ": " << (v ? "ok" : "FAIL") << "\n"; };
    os << "invariants:\n";
    flag("tau(1) = 0", f.tau_at_one);
    flag("anti-palindromic", f.anti_palindromic);
    flag("det J = 1", f.det_j_one);
    flag("eigenvalue 1", f.eigenvalue_one);
    flag("Fricke identity", f.fricke);
    flag("trace sanity", f.tr_field_sanity);
    flag("gluing residual", f.gluing_residual);
    os << (r.pass ? "PASS" : "FAIL") << "\n";
    return os.str();
}

std::string report_csv_header() {
    return "word,input,rotation,N,volume,gluing_residual,dev_A_Cbig,dev_A_C,dev_Cbig_C,abs_tau_at_one,"
           "abs_detJ_minus_1,abs_det_I_minus_J,fricke_residual,pass";
}

std::string report_csv_row(const ComparisonReport& r) {
    std::ostringstream os;
    os << std::setprecision(17) << r.word << ',' << r.input << ',' << r.rotation << ',' << r.n << ',' << r.volume
       << ',' << r.gluing_residual << ',' << r.a_vs_cbig.relative_deviation << ',' << r.a_vs_c.relative_deviation
       << ',' << r.cbig_vs_c.relative_deviation << ',' << std::abs(r.tau_at_one) << ',' << std::abs(r.det_j - 1.0)
       << ',' << std::abs(r.det_i_minus_j) << ',' << r.fricke_residual << ',' << (r.pass ? "true" : "false");
    return os.str();
}

json general_input_to_json(const GeneralInput& in) {
    const auto& d = in.data;
    json j{{"N", d.n},
           {"G", matrix_to_json(d.G)},
           {"Gp", matrix_to_json(d.Gp)},
           {"Gpp", matrix_to_json(d.Gpp)},
           {"shapes", cplx_list_to_json(in.shapes)},
           {"flattening", {{"f", d.flattening.f}, {"fp", d.flattening.fp}, {"fpp", d.flattening.fpp}}}};
    json comp = json::array();
    for (const auto& c : d.completeness) comp.push_back({{"name", c.name}, {"C", c.c}, {"Cp", c.cp}, {"Cpp", c.cpp}});
    if (!comp.empty()) j["completeness"] = comp;
    return j;
}

GeneralInput general_input_from_json(const json& j) {
    if (!j.is_object()) throw InputError("general input must be a JSON object");
    for (const char* key : {"N", "G", "Gp", "Gpp", "shapes", "flattening"})
        if (!j.contains(key)) throw InputError(std::string("general input is missing \"") + key + "\"");
    if (!j["N"].is_number_integer() || j["N"].get<int>() < 1) throw InputError("N must be a positive integer");
    GeneralInput in;
    auto& d = in.data;
    d.n = j["N"].get<int>();
    const auto n = static_cast<size_t>(d.n);
    d.G = matrix_from_json(j["G"], d.n, "G");
    d.Gp = matrix_from_json(j["Gp"], d.n, "Gp");
    d.Gpp = matrix_from_json(j["Gpp"], d.n, "Gpp");
    in.shapes = cplx_list_from_json(j["shapes"]);
    if (in.shapes.size() != n) throw InputError("shapes must have N entries");
    const json& fl = j["flattening"];
    if (!fl.is_object() || !fl.contains("f") || !fl.contains("fp") || !fl.contains("fpp"))
        throw InputError("flattening must have f, fp and fpp");
    d.flattening = {int_vector(fl["f"], n, "f"), int_vector(fl["fp"], n, "fp"), int_vector(fl["fpp"], n, "fpp")};
    if (j.contains("completeness")) {
        if (!j["completeness"].is_array()) throw InputError("completeness must be an array");
        for (const auto& c : j["completeness"]) {
            CompletenessCurve cur;
            cur.name = c.value("name", "");
            cur.c = int_vector(c.at("C"), n, "C");
            cur.cp = int_vector(c.at("Cp"), n, "Cp");
            cur.cpp = int_vector(c.at("Cpp"), n, "Cpp");
            d.completeness.push_back(std::move(cur));
        }
    }
    return in;
}

json one_loop_to_json(const OneLoopResult& r) {
    return {{"route", route_name(r.route)},
            {"tau", poly_to_json(r.tau)},
            {"tau_normalized", poly_to_json(r.tau_normalized)},
            {"normalization", kNormalization},
            {"shape_residual", r.shape_residual},
            {"degree_spread", r.degree_spread},
            {"warnings", r.warnings}};
}

}  // namespace twistloop
