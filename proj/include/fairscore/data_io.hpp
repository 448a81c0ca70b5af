#pragma once

#include <string>
#include <vector>

#include "fairscore/core_model.hpp"

namespace fairscore {

enum class ColumnKind { Numeric, Categorical, Binary, Label, Sensitive };

std::string column_kind_name(ColumnKind k);
ColumnKind column_kind_from_name(const std::string& s);

// Parsed CSV with schema-declared column kinds. Cells hold raw strings;
// numeric parsing happens at binarization. Rows with missing (empty) cells
// are dropped at load time.
struct RawTable {
    std::vector<std::string> names;
    std::vector<ColumnKind> kinds;
    std::vector<std::vector<std::string>> rows;
    int label_col = -1;
    std::vector<int> sensitive_cols;
    std::string positive_label;

    int label_of_row(int i) const;  // +1 / -1 via positive_label
};

struct LoadResult {
    RawTable table;
    int dropped_rows = 0;  // rows removed for missing values
};

// RFC-4180 CSV (quoted fields, embedded commas/newlines, "" escapes) with a
// header row; schema is a JSON file {"columns": {name: kind...},
// "positive_label": value}. Every header column must be declared and vice
// versa; exactly one label and at least one sensitive column are required.
LoadResult load_csv(const std::string& csv_path,
                    const std::string& schema_path);

struct BinarizeConfig {
    std::vector<Rat> quantiles;        // defaults to quartiles when empty
    bool sensitive_as_feature = false; // one-hot sensitive values as inputs
    bool intersectional_groups = false;  // group by the tuple of sensitive
                                         // values instead of the first column
};

struct BinarizeResult {
    Dataset data;
    std::vector<std::string> warnings;
};

// Categorical columns one-hot as "name=value"; numeric columns become
// indicator columns "name<=t" at the lower empirical quantiles (deduplicated,
// all-constant indicators dropped); binary columns pass through; an intercept
// column is prepended. Sensitive values define groups.
BinarizeResult binarize(const RawTable& table,
                        const BinarizeConfig& config = {});

struct SplitResult {
    Dataset train;
    Dataset test;
    std::vector<std::string> warnings;  // groups missing from a part
};

// Seeded shuffle partition; train size = round(fraction * n) clamped to
// [1, n-1]. Group ids are compacted per part when a group is absent (with a
// warning).
SplitResult split(const Dataset& data, double train_fraction,
                  unsigned long long seed);

// Randomly reduces the majority class to exactly the minority count,
// preserving original row order; group ids are compacted when a group
// disappears. Throws when only one class is present.
Dataset undersample(const Dataset& data, unsigned long long seed);

}  // namespace fairscore
