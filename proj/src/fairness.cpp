#include "fairscore/fairness.hpp"

#include <algorithm>

namespace fairscore {

std::string notion_name(Notion n) {
    switch (n) {
        case Notion::SP: return "sp";
        case Notion::EO: return "eo";
        case Notion::OMR: return "omr";
        case Notion::PE: return "pe";
        case Notion::EODDS: return "eodds";
    }
    return "?";
}

Notion notion_from_name(const std::string& s) {
    if (s == "sp") return Notion::SP;
    if (s == "eo") return Notion::EO;
    if (s == "omr") return Notion::OMR;
    if (s == "pe") return Notion::PE;
    if (s == "eodds") return Notion::EODDS;
    throw std::invalid_argument("unknown fairness notion: " + s);
}

GroupIndex group_index(const std::vector<int>& groups,
                       const std::vector<int>& labels, int c) {
    GroupIndex gi;
    gi.c = c;
    gi.members.resize(c);
    gi.pos.resize(c);
    gi.neg.resize(c);
    gi.n_group.assign(c, 0);
    gi.n_pos.assign(c, 0);
    gi.n_neg.assign(c, 0);
    for (size_t i = 0; i < groups.size(); ++i) {
        int p = groups[i];
        gi.members[p].push_back(static_cast<int>(i));
        gi.n_group[p]++;
        if (labels[i] > 0) {
            gi.pos[p].push_back(static_cast<int>(i));
            gi.n_pos[p]++;
            gi.total_pos++;
        } else {
            gi.neg[p].push_back(static_cast<int>(i));
            gi.n_neg[p]++;
            gi.total_neg++;
        }
    }
    return gi;
}

GroupIndex group_index(const Dataset& data) {
    return group_index(data.group, data.y, data.c);
}

namespace {

Rat sum_over(const std::vector<int>& psi, const std::vector<int>& idx) {
    long long s = 0;
    for (int i : idx) s += psi[i];
    return rat_of_long(s);
}

void check_pair(const GroupIndex& gi, int p, int q) {
    if (p == q || p < 0 || q < 0 || p >= gi.c || q >= gi.c)
        throw std::invalid_argument("invalid group pair");
}

}  // namespace

Rat gap_sp_signed(const std::vector<int>& psi, const GroupIndex& gi, int p,
                  int q) {
    check_pair(gi, p, q);
    Rat np = rat_of_long(gi.n_group[p]), nq = rat_of_long(gi.n_group[q]);
    Rat base = rat_of_long(gi.n_pos[p]) / np - rat_of_long(gi.n_pos[q]) / nq;
    Rat corr_p = (sum_over(psi, gi.neg[p]) - sum_over(psi, gi.pos[p])) / np;
    Rat corr_q = (sum_over(psi, gi.neg[q]) - sum_over(psi, gi.pos[q])) / nq;
    return base + corr_p - corr_q;
}

Rat gap_sp(const std::vector<int>& psi, const GroupIndex& gi, int p, int q) {
    return abs(gap_sp_signed(psi, gi, p, q));
}

Rat gap_omr(const std::vector<int>& psi, const GroupIndex& gi, int p, int q) {
    check_pair(gi, p, q);
    Rat rp = sum_over(psi, gi.members[p]) / rat_of_long(gi.n_group[p]);
    Rat rq = sum_over(psi, gi.members[q]) / rat_of_long(gi.n_group[q]);
    return abs(Rat(rp - rq));
}

Rat gap_eo(const std::vector<int>& psi, const GroupIndex& gi, int p, int q) {
    check_pair(gi, p, q);
    for (int g : {p, q})
        if (gi.n_pos[g] == 0)
            throw MetricUndefinedError(
                "equal-opportunity gap undefined: group " + std::to_string(g) +
                    " has no positive examples",
                g);
    Rat rp = sum_over(psi, gi.pos[p]) / rat_of_long(gi.n_pos[p]);
    Rat rq = sum_over(psi, gi.pos[q]) / rat_of_long(gi.n_pos[q]);
    return abs(Rat(rp - rq));
}

Rat gap_pe(const std::vector<int>& psi, const GroupIndex& gi, int p, int q) {
    check_pair(gi, p, q);
    for (int g : {p, q})
        if (gi.n_neg[g] == 0)
            throw MetricUndefinedError(
                "predictive-equality gap undefined: group " +
                    std::to_string(g) + " has no negative examples",
                g);
    Rat rp = sum_over(psi, gi.neg[p]) / rat_of_long(gi.n_neg[p]);
    Rat rq = sum_over(psi, gi.neg[q]) / rat_of_long(gi.n_neg[q]);
    return abs(Rat(rp - rq));
}

Rat fairness_level(Notion notion, const std::vector<int>& psi,
                   const GroupIndex& gi) {
    if (notion == Notion::EODDS) {
        Rat eo = fairness_level(Notion::EO, psi, gi);
        Rat pe = fairness_level(Notion::PE, psi, gi);
        return std::max(eo, pe);
    }
    Rat level = 0;
    for (int p = 0; p < gi.c; ++p) {
        for (int q = p + 1; q < gi.c; ++q) {
            Rat g;
            switch (notion) {
                case Notion::SP: g = gap_sp(psi, gi, p, q); break;
                case Notion::EO: g = gap_eo(psi, gi, p, q); break;
                case Notion::OMR: g = gap_omr(psi, gi, p, q); break;
                case Notion::PE: g = gap_pe(psi, gi, p, q); break;
                default: throw std::logic_error("unreachable");
            }
            level = std::max(level, g);
        }
    }
    return level;
}

}  // namespace fairscore
