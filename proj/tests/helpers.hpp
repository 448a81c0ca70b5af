#pragma once

// Shared fixtures for the unit and acceptance suites: small handcrafted
// datasets and a seeded generator of solver-sized random instances.

#include <random>
#include <vector>

#include "fairscore/mip.hpp"
#include "fairscore/welfare.hpp"

namespace testutil {

using namespace fairscore;

// Rows given without the intercept column; 0/1 entries.
inline Dataset make_dataset(const std::vector<std::vector<int>>& rows,
                            const std::vector<int>& labels,
                            const std::vector<int>& groups,
                            std::set<int> sensitive = {}) {
    std::vector<std::vector<Rat>> x;
    for (const auto& r : rows) {
        std::vector<Rat> row{Rat(1)};
        for (int v : r) row.push_back(Rat(v));
        x.push_back(std::move(row));
    }
    std::vector<std::string> names{"(intercept)"};
    for (size_t j = 1; j < x.at(0).size(); ++j)
        names.push_back("x" + std::to_string(j));
    return Dataset::create(std::move(x), labels, groups, std::move(names),
                           std::move(sensitive));
}

// Six-patient fixture: two groups of three, labels (+,+,-) in each group.
// The decision patterns below reproduce the classic worked gaps: pattern
// D3 has a treatment-rate gap of 1/3, false-negative-rate gap of 1/2 and an
// error-rate gap of 1/3; pattern D2 has a false-negative-rate gap of 1/2.
inline Dataset figure1() {
    return make_dataset(
        {{1, 0}, {0, 1}, {1, 1}, {0, 0}, {1, 0}, {0, 1}},
        {+1, +1, -1, +1, +1, -1}, {0, 0, 0, 1, 1, 1});
}

// psi vectors of the three decision patterns on figure1() (group 0 then
// group 1, labels (+,+,-) each): D1 predicts all positive; D2 predicts
// (+,-,+) / (+,+,-); D3 predicts (+,-,+) / (+,+,+).
inline std::vector<int> fig1_psi_d1() { return {0, 0, 1, 0, 0, 1}; }
inline std::vector<int> fig1_psi_d2() { return {0, 1, 1, 0, 0, 0}; }
inline std::vector<int> fig1_psi_d3() { return {0, 1, 1, 0, 0, 1}; }

struct RandomInstance {
    Dataset data;
    WelfareParams params;
    Notion notion = Notion::SP;
    SolveMode mode = SolveMode::joint();
    SideConstraints side;
    std::vector<long long> omegas;
    Rat gamma = rat(1, 10);
};

// Deterministic solver-sized instances: n <= 24, d <= 4, Omega = 2, binary
// features, every group containing both labels (so every notion is defined
// and the welfare floor of Theorem 2 is non-degenerate), non-constant b with
// sum b < (max b) n. Notion and mode cycle with the seed.
inline RandomInstance random_instance(long long seed) {
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^
                        static_cast<unsigned long long>(seed) * 0x2545f4914f6cdd1dULL);
    auto pick = [&rng](long long m) { return static_cast<int>(rng() % m); };

    RandomInstance inst;
    const int n = 8 + pick(17);          // 8..24
    const int d = 1 + pick(4);           // 1..4
    const int c = pick(4) == 0 ? 3 : 2;  // mostly two groups

    std::vector<std::vector<int>> rows(n, std::vector<int>(d));
    for (auto& r : rows)
        for (int& v : r) v = pick(2);
    std::vector<int> groups(n);
    for (int i = 0; i < n; ++i) groups[i] = pick(c);
    auto group_sizes = [&groups, c]() {
        std::vector<int> sz(c, 0);
        for (int g : groups) ++sz[g];
        return sz;
    };
    for (bool fixed = false; !fixed;) {  // every group needs >= 2 members
        fixed = true;
        std::vector<int> sz = group_sizes();
        for (int p = 0; p < c; ++p) {
            if (sz[p] >= 2) continue;
            fixed = false;
            int donor = 0;
            for (int q = 0; q < c; ++q)
                if (sz[q] > sz[donor]) donor = q;
            for (int i = 0; i < n; ++i)
                if (groups[i] == donor) {
                    groups[i] = p;
                    break;
                }
            break;
        }
    }
    std::vector<int> labels(n);
    for (int& y : labels) y = pick(2) ? 1 : -1;
    for (int p = 0; p < c; ++p) {  // both labels in every group
        int first = -1;
        for (int i = 0; i < n; ++i) {
            if (groups[i] != p) continue;
            if (first < 0) {
                labels[i] = 1;
                first = i;
            } else {
                labels[i] = -1;
                break;
            }
        }
    }
    inst.data = make_dataset(rows, labels, groups);

    const Rat b_values[] = {rat(1, 2), Rat(1), rat(3, 2), Rat(2)};
    const Rat a_values[] = {rat(1, 2), Rat(1), Rat(2)};
    const Rat rho_values[] = {Rat(0), rat(1, 4), rat(1, 2)};
    const Rat l0_values[] = {Rat(0), rat(1, 100), rat(1, 20)};
    const Rat eps_values[] = {Rat(0), rat(1, 100)};
    inst.params = WelfareParams::uniform(n);
    for (int i = 0; i < n; ++i) {
        inst.params.a[i] = a_values[pick(3)];
        inst.params.b[i] = b_values[pick(4)];
    }
    inst.params.b[0] = rat(1, 2);  // keeps sum b strictly below (max b) n
    inst.params.b[1] = Rat(2);
    inst.params.rho_bar = rho_values[pick(3)];
    inst.params.lambda0 = l0_values[pick(3)];
    inst.params.epsilon = eps_values[pick(2)];

    const Notion notions[] = {Notion::SP, Notion::EO, Notion::OMR, Notion::PE,
                              Notion::EODDS};
    inst.notion = notions[seed % 5];
    const Rat ds_values[] = {Rat(0), rat(1, 4), rat(1, 2), Rat(1)};
    switch (seed % 3) {
        case 0: inst.mode = SolveMode::joint(); break;
        case 1: inst.mode = SolveMode::fixed(ds_values[pick(4)]); break;
        default: inst.mode = SolveMode::accuracy(); break;
    }

    if (pick(4) == 0) {
        switch (pick(3)) {
            case 0:
                inst.side.model_size = {0, 1 + pick(d)};
                break;
            case 1:
                inst.side.sign_constraints[1 + pick(d)] = pick(2) ? 1 : -1;
                break;
            default:
                inst.side.excluded_features.insert(1 + pick(d));
                break;
        }
    }
    inst.omegas.assign(d + 1, 2);
    return inst;
}

}  // namespace testutil
