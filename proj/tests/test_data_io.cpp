#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "../vendor/doctest.h"
#include "fairscore/data_io.hpp"
#include "helpers.hpp"

using namespace fairscore;
using namespace testutil;

namespace {

std::string write_file(const std::string& name, const std::string& text) {
    std::filesystem::path dir = "io_test_tmp";
    std::filesystem::create_directories(dir);
    std::filesystem::path p = dir / name;
    std::ofstream out(p, std::ios::binary);
    out << text;
    return p.string();
}

const char* kSchema = R"({
  "columns": {
    "age": "numeric",
    "job": "categorical",
    "smoker": "binary",
    "outcome": "label",
    "sex": "sensitive"
  },
  "positive_label": "yes"
})";

std::string schema_path() { return write_file("schema.json", kSchema); }

// Numeric column "v" over both groups; labels alternate.
RawTable numeric_table(const std::vector<std::string>& values) {
    RawTable t;
    t.names = {"v", "outcome", "sex"};
    t.kinds = {ColumnKind::Numeric, ColumnKind::Label, ColumnKind::Sensitive};
    t.label_col = 1;
    t.sensitive_cols = {2};
    t.positive_label = "yes";
    for (size_t i = 0; i < values.size(); ++i)
        t.rows.push_back({values[i], i % 2 ? "no" : "yes",
                          i % 2 ? "b" : "a"});
    return t;
}

}  // namespace

TEST_CASE("csv loading handles quoting, escapes and embedded newlines") {
    std::string csv = write_file("quoted.csv",
                                 "age,job,smoker,outcome,sex\n"
                                 "35,\"cook, chief\",1,yes,f\r\n"
                                 "22,\"say \"\"hi\"\"\",0,no,m\n"
                                 "41,\"two\nlines\",1,yes,f\n"
                                 "19,clerk,0,no,m\n"
                                 "\n");
    LoadResult r = load_csv(csv, schema_path());
    CHECK(r.dropped_rows == 0);
    REQUIRE(r.table.rows.size() == 4);
    CHECK(r.table.rows[0][1] == "cook, chief");
    CHECK(r.table.rows[1][1] == "say \"hi\"");
    CHECK(r.table.rows[2][1] == "two\nlines");
    CHECK(r.table.rows[3][0] == "19");
    CHECK(r.table.label_col == 3);
    CHECK(r.table.sensitive_cols == std::vector<int>{4});
    CHECK(r.table.label_of_row(0) == 1);
    CHECK(r.table.label_of_row(1) == -1);
}

TEST_CASE("rows with missing cells are dropped and counted") {
    std::string csv = write_file("missing.csv",
                                 "age,job,smoker,outcome,sex\n"
                                 "35,cook,1,yes,f\n"
                                 "55,,1,yes,f\n"
                                 ",clerk,0,no,m\n"
                                 "19,clerk,0,no,m\n");
    LoadResult r = load_csv(csv, schema_path());
    CHECK(r.dropped_rows == 2);
    CHECK(r.table.rows.size() == 2);
}

TEST_CASE("csv schema violations are rejected") {
    std::string schema = schema_path();
    auto header = [&](const std::string& body) {
        return write_file("bad.csv", body);
    };

    // Undeclared column in the data header.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex,extra\n"
                                    "1,a,1,yes,f,9\n"),
                             schema),
                    std::invalid_argument);
    // Declared column missing from the data header.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome\n1,a,1,yes\n"),
                             schema),
                    std::invalid_argument);
    // Ragged record.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex\n1,a,1,yes\n"),
                             schema),
                    std::invalid_argument);
    // Unterminated quote.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex\n"
                                    "1,\"cook,1,yes,f\n"),
                             schema),
                    std::invalid_argument);
    // Non-binary value in a binary column.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex\n"
                                    "1,a,2,yes,f\n"),
                             schema),
                    std::invalid_argument);
    // Unparseable numeric cell.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex\n"
                                    "old,a,1,yes,f\n"),
                             schema),
                    std::invalid_argument);
    // More than two label values.
    CHECK_THROWS_AS(load_csv(header("age,job,smoker,outcome,sex\n"
                                    "1,a,1,yes,f\n"
                                    "2,a,1,no,f\n"
                                    "3,a,1,maybe,m\n"),
                             schema),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_csv("io_test_tmp/does_not_exist.csv", schema),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_csv(header("age\n1\n"),
                             write_file("noschema.json", "{}")),
                    std::invalid_argument);

    std::string two_labels = write_file("two_labels.json", R"({
      "columns": {"a": "label", "b": "label", "s": "sensitive"},
      "positive_label": "1"})");
    CHECK_THROWS_AS(load_csv(header("a,b,s\n1,1,x\n"), two_labels),
                    std::invalid_argument);
    std::string no_sensitive = write_file("no_sensitive.json", R"({
      "columns": {"a": "binary", "b": "label"},
      "positive_label": "1"})");
    CHECK_THROWS_AS(load_csv(header("a,b\n1,1\n"), no_sensitive),
                    std::invalid_argument);
    std::string bad_kind = write_file("bad_kind.json", R"({
      "columns": {"a": "text", "b": "label", "s": "sensitive"},
      "positive_label": "1"})");
    CHECK_THROWS_AS(load_csv(header("a,b,s\n1,1,x\n"), bad_kind),
                    std::invalid_argument);
}

TEST_CASE("non-string positive labels compare against raw cells") {
    std::string schema = write_file("numlabel.json", R"({
      "columns": {"v": "binary", "y": "label", "s": "sensitive"},
      "positive_label": 1})");
    std::string csv = write_file("numlabel.csv", "v,y,s\n1,1,a\n0,0,b\n");
    LoadResult r = load_csv(csv, schema);
    CHECK(r.table.label_of_row(0) == 1);
    CHECK(r.table.label_of_row(1) == -1);
}

TEST_CASE("numeric columns binarize at the lower empirical quantiles") {
    RawTable t = numeric_table({"1", "2", "3", "4", "5", "6", "7", "8"});
    BinarizeResult r = binarize(t);
    CHECK(r.warnings.empty());
    CHECK(r.data.feature_names ==
          std::vector<std::string>{"(intercept)", "v<=2", "v<=4", "v<=6"});
    // Row with v = 5 sits above the first two thresholds only.
    CHECK(r.data.x[4] == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(1)});
    CHECK(r.data.x[0] == std::vector<Rat>{Rat(1), Rat(1), Rat(1), Rat(1)});
    CHECK(r.data.x[7] == std::vector<Rat>{Rat(1), Rat(0), Rat(0), Rat(0)});
    CHECK(r.data.y[0] == 1);
    CHECK(r.data.y[1] == -1);
    CHECK(r.data.group == std::vector<int>{0, 1, 0, 1, 0, 1, 0, 1});

    BinarizeConfig median_only;
    median_only.quantiles = {rat(1, 2)};
    CHECK(binarize(t, median_only).data.feature_names ==
          std::vector<std::string>{"(intercept)", "v<=4"});
}

TEST_CASE("duplicate and degenerate thresholds collapse") {
    // Lower quartile and median both land on 1; the upper quartile hits the
    // maximum and would be constant.
    RawTable t = numeric_table({"1", "1", "2", "2"});
    BinarizeResult r = binarize(t);
    CHECK(r.data.feature_names ==
          std::vector<std::string>{"(intercept)", "v<=1"});
    CHECK(r.warnings.empty());

    RawTable constant = numeric_table({"5", "5", "5", "5"});
    BinarizeResult rc = binarize(constant);
    CHECK(rc.data.feature_names == std::vector<std::string>{"(intercept)"});
    REQUIRE(rc.warnings.size() == 1);
    CHECK(rc.warnings[0].find("no usable thresholds") != std::string::npos);

    BinarizeConfig bad;
    bad.quantiles = {Rat(0)};
    CHECK_THROWS_AS(binarize(t, bad), std::invalid_argument);
    bad.quantiles = {Rat(1)};
    CHECK_THROWS_AS(binarize(t, bad), std::invalid_argument);
}

TEST_CASE("categorical one-hot, binary passthrough and sensitive handling") {
    RawTable t;
    t.names = {"job", "smoker", "outcome", "sex"};
    t.kinds = {ColumnKind::Categorical, ColumnKind::Binary, ColumnKind::Label,
               ColumnKind::Sensitive};
    t.label_col = 2;
    t.sensitive_cols = {3};
    t.positive_label = "yes";
    t.rows = {{"cook", "1", "yes", "f"},
              {"clerk", "0", "no", "m"},
              {"cook", "0", "yes", "m"},
              {"nurse", "1", "no", "f"}};

    BinarizeResult r = binarize(t);
    CHECK(r.data.feature_names ==
          std::vector<std::string>{"(intercept)", "job=clerk", "job=cook",
                                   "job=nurse", "smoker"});
    CHECK(r.data.x[0] ==
          std::vector<Rat>{Rat(1), Rat(0), Rat(1), Rat(0), Rat(1)});
    CHECK(r.data.group == std::vector<int>{0, 1, 1, 0});
    CHECK(r.data.sensitive_columns.empty());

    BinarizeConfig cfg;
    cfg.sensitive_as_feature = true;
    BinarizeResult rs = binarize(t, cfg);
    CHECK(rs.data.feature_names ==
          std::vector<std::string>{"(intercept)", "job=clerk", "job=cook",
                                   "job=nurse", "smoker", "sex=f", "sex=m"});
    CHECK(rs.data.sensitive_columns == std::set<int>{5, 6});
    CHECK(rs.data.x[0][5] == 1);
    CHECK(rs.data.x[1][5] == 0);
}

TEST_CASE("groups come from the sensitive tuple when intersectional") {
    RawTable t;
    t.names = {"smoker", "outcome", "sex", "region"};
    t.kinds = {ColumnKind::Binary, ColumnKind::Label, ColumnKind::Sensitive,
               ColumnKind::Sensitive};
    t.label_col = 1;
    t.sensitive_cols = {2, 3};
    t.positive_label = "yes";
    t.rows = {{"1", "yes", "a", "x"},
              {"0", "no", "a", "y"},
              {"1", "yes", "b", "x"},
              {"0", "no", "b", "x"}};

    CHECK(binarize(t).data.c == 2);  // first sensitive column only
    BinarizeConfig cfg;
    cfg.intersectional_groups = true;
    Dataset inter = binarize(t, cfg).data;
    CHECK(inter.c == 3);
    CHECK(inter.group == std::vector<int>{0, 1, 2, 2});
}

TEST_CASE("binary tables round-trip through binarization") {
    RawTable t;
    t.names = {"u", "v", "outcome", "sex"};
    t.kinds = {ColumnKind::Binary, ColumnKind::Binary, ColumnKind::Label,
               ColumnKind::Sensitive};
    t.label_col = 2;
    t.sensitive_cols = {3};
    t.positive_label = "yes";
    t.rows = {{"1", "0", "yes", "f"}, {"0", "1", "no", "m"}};
    Dataset data = binarize(t).data;
    CHECK(data.feature_names ==
          std::vector<std::string>{"(intercept)", "u", "v"});
    CHECK(data.x[0] == std::vector<Rat>{Rat(1), Rat(1), Rat(0)});
    CHECK(data.x[1] == std::vector<Rat>{Rat(1), Rat(0), Rat(1)});
    CHECK(data.all_binary());
}

TEST_CASE("csv to dataset end to end") {
    std::string csv = write_file("endtoend.csv",
                                 "age,job,smoker,outcome,sex\n"
                                 "35,cook,1,yes,f\n"
                                 "22,clerk,0,no,m\n"
                                 "41,cook,1,yes,f\n"
                                 "19,nurse,0,no,m\n");
    LoadResult loaded = load_csv(csv, schema_path());
    Dataset data = binarize(loaded.table).data;
    // Ages sort to 19,22,35,41: lower quartile 19, median 22, upper 35.
    CHECK(data.feature_names ==
          std::vector<std::string>{"(intercept)", "age<=19", "age<=22",
                                   "age<=35", "job=clerk", "job=cook",
                                   "job=nurse", "smoker"});
    CHECK(data.n == 4);
    CHECK(data.d == 7);
    CHECK(data.x[1][2] == 1);  // 22 <= 22
    CHECK(data.x[0][2] == 0);  // 35 > 22
    CHECK(data.y == std::vector<int>{1, -1, 1, -1});
}

namespace {

std::vector<std::string> row_keys(const Dataset& data) {
    std::vector<std::string> keys;
    for (int i = 0; i < data.n; ++i) {
        std::string k = std::to_string(data.y[i]);
        for (const Rat& v : data.x[i]) k += "|" + rat_str(v);
        keys.push_back(k);
    }
    return keys;
}

// 4 + 4 + 1 rows across three groups; the singleton group forces exactly one
// missing-group warning in every split.
Dataset three_group_data() {
    return make_dataset({{1, 0}, {0, 1}, {1, 1}, {0, 0}, {1, 0}, {0, 1},
                         {1, 1}, {0, 0}, {1, 0}},
                        {+1, -1, +1, -1, +1, -1, +1, -1, +1},
                        {0, 0, 0, 0, 1, 1, 1, 1, 2});
}

}  // namespace

TEST_CASE("split partitions the rows deterministically") {
    Dataset data = three_group_data();
    int succeeded = 0;
    for (unsigned long long seed = 0; seed < 10; ++seed) {
        SplitResult r = [&] {
            try {
                return split(data, 0.5, seed);
            } catch (const std::invalid_argument&) {
                // A part that collapses to one group is not a valid dataset.
                return SplitResult{};
            }
        }();
        if (r.train.n == 0) continue;
        ++succeeded;
        CHECK(r.train.n == 5);  // round(4.5) rounds half away from zero
        CHECK(r.test.n == 4);
        // The singleton group is always absent from one of the parts.
        REQUIRE(!r.warnings.empty());
        CHECK(r.warnings[0].find("group(s) missing") != std::string::npos);

        std::vector<std::string> all = row_keys(data);
        std::vector<std::string> parts = row_keys(r.train);
        std::vector<std::string> test_keys = row_keys(r.test);
        parts.insert(parts.end(), test_keys.begin(), test_keys.end());
        std::sort(all.begin(), all.end());
        std::sort(parts.begin(), parts.end());
        CHECK(all == parts);

        SplitResult again = split(data, 0.5, seed);
        CHECK(row_keys(again.train) == row_keys(r.train));
        CHECK(row_keys(again.test) == row_keys(r.test));
        CHECK(again.train.group == r.train.group);
    }
    CHECK(succeeded >= 7);

    CHECK_THROWS_AS(split(data, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(data, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(split(data, -0.25, 1), std::invalid_argument);
}

TEST_CASE("undersampling balances the classes in place") {
    // 7 positive / 3 negative; negatives cover both groups so every
    // undersample keeps a valid dataset.
    Dataset data = make_dataset(
        {{1}, {0}, {1}, {0}, {1}, {0}, {1}, {0}, {1}, {0}},
        {+1, -1, +1, -1, +1, -1, +1, +1, +1, +1},
        {0, 1, 0, 1, 0, 1, 0, 1, 0, 1});
    Dataset balanced = undersample(data, 7);
    CHECK(balanced.n == 6);
    int pos = 0, neg = 0;
    for (int y : balanced.y) (y > 0 ? pos : neg)++;
    CHECK(pos == 3);
    CHECK(neg == 3);

    // Kept rows appear in their original order.
    std::vector<std::string> original = row_keys(data);
    std::vector<std::string> kept = row_keys(balanced);
    size_t at = 0;
    for (const std::string& k : original)
        if (at < kept.size() && kept[at] == k) ++at;
    CHECK(at == kept.size());

    Dataset again = undersample(data, 7);
    CHECK(row_keys(again) == kept);

    // Already balanced data passes through whole.
    Dataset tie = make_dataset({{1}, {0}, {1}, {0}}, {+1, -1, +1, -1},
                               {0, 1, 0, 1});
    CHECK(undersample(tie, 3).n == 4);

    Dataset one_class = make_dataset({{1}, {0}}, {+1, +1}, {0, 1});
    CHECK_THROWS_AS(undersample(one_class, 1), std::invalid_argument);
}
