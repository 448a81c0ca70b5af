#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fairscore/core_model.hpp"

namespace fairscore {

enum class Notion { SP, EO, OMR, PE, EODDS };

std::string notion_name(Notion n);
Notion notion_from_name(const std::string& s);

// Raised when a notion's rate is undefined on a group (e.g. EO with no
// positive examples in the group).
struct MetricUndefinedError : std::runtime_error {
    int group;
    explicit MetricUndefinedError(const std::string& what, int g)
        : std::runtime_error(what), group(g) {}
};

GroupIndex group_index(const Dataset& data);
GroupIndex group_index(const std::vector<int>& groups,
                       const std::vector<int>& labels, int c);

// Signed predicted-positive-rate difference between groups p and q under the
// psi convention:
//   (N_p+/N_p - N_q+/N_q) + (1/N_p)(sum_{I_p-}psi - sum_{I_p+}psi)
//                         - (1/N_q)(sum_{I_q-}psi - sum_{I_q+}psi)
Rat gap_sp_signed(const std::vector<int>& psi, const GroupIndex& gi, int p,
                  int q);
Rat gap_sp(const std::vector<int>& psi, const GroupIndex& gi, int p, int q);

// | error rate p - error rate q |
Rat gap_omr(const std::vector<int>& psi, const GroupIndex& gi, int p, int q);

// False-negative-rate gap; requires positives in both groups.
Rat gap_eo(const std::vector<int>& psi, const GroupIndex& gi, int p, int q);

// False-positive-rate gap; requires negatives in both groups.
Rat gap_pe(const std::vector<int>& psi, const GroupIndex& gi, int p, int q);

// Max over all unordered group pairs of the notion's gap; EODDS is
// max(EO level, PE level).
Rat fairness_level(Notion notion, const std::vector<int>& psi,
                   const GroupIndex& gi);

}  // namespace fairscore
