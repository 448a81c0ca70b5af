#pragma once

#include <map>
#include <string>
#include <vector>

#include "fairscore/fairness.hpp"
#include "fairscore/welfare.hpp"

namespace fairscore {

// Evaluation summary of a scoring system on a dataset. Rationals are exact;
// the JSON rendering carries both the exact fraction and a double.
struct Report {
    int n = 0;
    Rat accuracy = 0;          // fraction with y * score > 0
    Rat weighted_error = 0;    // (1/n) sum b_i psi_i
    int model_size = 0;        // nonzero non-intercept coefficients
    bool degenerate = false;   // all coefficients zero (every score is 0)
    std::map<std::string, Rat> delta_achieved;     // per requested notion
    std::map<std::string, std::string> delta_errors;  // undefined notions
    Rat delta_used = 0;        // level of the system's own notion (or 0)
    Rat swf_total = 0;
    Rat swf_normalized = 0;
    SystemMetadata meta;       // echoed from the system
};

// Per-notion failures (e.g. a group without positives under EO) land in
// delta_errors instead of throwing.
Report evaluate(const ScoringSystem& sys, const Dataset& data,
                const WelfareParams& params,
                const std::vector<Notion>& notions);

std::string report_to_json(const Report& r);

// Fixed-width scorecard: nonzero non-intercept rules ordered by |points|
// descending then feature index, the intercept as a base score, the decision
// rule, and metadata. Byte-identical across renders.
std::string render_scorecard(const ScoringSystem& sys);

// Reads the points back out of a rendered scorecard; returns the coefficient
// vector aligned with feature_names. Throws on rules naming unknown features.
std::vector<long long> parse_scorecard(const std::string& text,
                                       const std::vector<std::string>& feature_names);

}  // namespace fairscore
