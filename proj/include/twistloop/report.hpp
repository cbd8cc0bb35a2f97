#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "twistloop/oneloop.hpp"
#include "twistloop/pipeline.hpp"

namespace twistloop {

using json = nlohmann::json;

inline constexpr const char* kNormalization =
    "min exponent 0; sign chosen so the constant coefficient has Re >= 0 (Im >= 0 if Re == 0)";

json cplx_to_json(cplx z);
cplx cplx_from_json(const json& j);
json cplx_list_to_json(const std::vector<cplx>& v);
std::vector<cplx> cplx_list_from_json(const json& j);

// {"min_exponent": k, "coefficients": [[re, im], ...]}
json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const json& j);
std::string poly_to_text(const LaurentPoly& p, int precision = 10);

void to_json(json& j, const UnitAlignment& a);
void from_json(const json& j, UnitAlignment& a);
void to_json(json& j, const ComparisonReport& r);
void from_json(const json& j, ComparisonReport& r);

std::string report_text(const ComparisonReport& r);
std::string report_csv_header();
std::string report_csv_row(const ComparisonReport& r);

struct GeneralInput {
    TwistedGluingData data;
    std::vector<cplx> shapes;
};

// Matrix entries are {"exponent": integer} maps. Schema problems throw InputError.
json general_input_to_json(const GeneralInput& in);
GeneralInput general_input_from_json(const json& j);

json one_loop_to_json(const OneLoopResult& r);

}  // namespace twistloop
