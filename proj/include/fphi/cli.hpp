#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "fphi/serialize.hpp"

namespace fphi {

enum ExitCode { kExitOk = 0, kExitInternal = 1, kExitInvalid = 2, kExitPrecision = 3 };

// "lattice:R+torus:T+elliptic:t1,t2+kummer:LAMBDA"; "" and "0" give the zero motive.
OneMotiveSpec parse_inline_spec(const std::string& text, EllipticFilMode mode);

struct SurveyRow {
    Integer q;
    long t = 0;
    std::string mode;
    bool ordinary = false;
    std::vector<Rational> slopes;
    std::size_t end_dim = 0;
    std::string classification;
    bool frobenius_member = false;
};

// [Z -> E] for every trace with t^2 <= 4q, in auto mode, plus scalar and
// jordan rows when t^2 = 4q. Ordered by t, then mode.
std::vector<SurveyRow> survey(const PadicContext& ctx);
std::string survey_table(const std::vector<SurveyRow>& rows);
Json to_json(const SurveyRow& row);

// Entry point behind the fphi executable; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fphi
