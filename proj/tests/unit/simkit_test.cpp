#include "seqboost/simkit.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "reference_tables.hpp"
#include "seqboost/csv.hpp"

using namespace seqboost;

namespace {

ExperimentPreset small(const std::string& name, std::size_t trials) {
  ExperimentPreset p = make_preset(name);
  p.trials = trials;
  return p;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Presets, NamesAndGrids) {
  for (const std::string& name : preset_names()) EXPECT_NO_THROW(make_preset(name));
  EXPECT_THROW(make_preset("fig9"), std::invalid_argument);
  const ExperimentPreset fig1 = make_preset("fig1");
  EXPECT_DOUBLE_EQ(fig1.alpha, 0.05);
  EXPECT_EQ(fig1.trials, 10000u);
  EXPECT_EQ(fig1.max_samples, 10000u);
  const ExperimentPreset fig3 = make_preset("fig3");
  EXPECT_DOUBLE_EQ(fig3.alpha, 0.01);
  EXPECT_DOUBLE_EQ(fig3.mu0, 0.5);
  EXPECT_DOUBLE_EQ(fig3.mu1, 0.55);
  for (const GridPoint& g : make_preset("fig4").grid) EXPECT_DOUBLE_EQ(g.delta, 0.3);
}

TEST(Presets, ZeroTrialsGiveNoRecords) {
  EXPECT_TRUE(run_preset(small("fig1", 0)).empty());
  EXPECT_TRUE(run_preset(make_preset("table2")).empty());
}

TEST(RunPreset, DeterministicAcrossParallelism) {
  for (const std::string& name : {"fig1", "fig3", "fig4", "figS1"}) {
    ExperimentPreset p = small(name, 6);
    if (name == "fig3") p.grid.resize(1);
    const std::string one = records_csv(run_preset(p, 1));
    const std::string four = records_csv(run_preset(p, 4));
    EXPECT_EQ(one, four) << name;
    EXPECT_EQ(summary_csv(summarize(run_preset(p, 3))), summary_csv(summarize(run_preset(p, 1)))) << name;
  }
}

TEST(RunPreset, SinkSeesRecordsInKeyOrder) {
  ExperimentPreset p = small("fig1", 5);
  std::vector<TrialRecord> seen;
  const auto all = run_preset(p, 3, [&](const TrialRecord& r) { seen.push_back(r); });
  ASSERT_EQ(seen.size(), all.size());
  ASSERT_EQ(all.size(), p.grid.size() * p.trials * 2);
  for (std::size_t i = 1; i < seen.size(); ++i) {
    const auto key = [](const TrialRecord& r) { return std::make_pair(r.grid_index, r.trial); };
    EXPECT_LE(key(seen[i - 1]), key(seen[i]));
    EXPECT_EQ(seen[i].method, all[i].method);
  }
}

TEST(RunPreset, PairedStreamsGivePathwiseDominance) {
  ExperimentPreset p = small("fig1", 20);
  const auto records = run_preset(p, 2);
  for (std::size_t i = 0; i + 1 < records.size(); i += 2) {
    ASSERT_EQ(records[i].method, "boosted");
    ASSERT_EQ(records[i + 1].method, "plain");
    EXPECT_LE(records[i].stopping_time, records[i + 1].stopping_time);
    EXPECT_LE(records[i].max_wealth, 1.0 / p.alpha);
  }
}

TEST(ImportanceSampling, Examples) {
  TrialRecord r;
  r.decision = Decision::RejectNull;
  r.raw_lr_at_stop = 20.0;
  const Estimate tight = importance_sampling_type1({r, r, r});
  EXPECT_DOUBLE_EQ(tight.value, 0.05);
  EXPECT_NEAR(tight.standard_error, 0.0, 1e-15);
  r.decision = Decision::Undecided;
  r.raw_lr_at_stop = 3.0;
  EXPECT_DOUBLE_EQ(importance_sampling_type1({r, r}).value, 0.0);
  r.raw_lr_at_stop = 0.0;
  EXPECT_THROW(importance_sampling_type1({r}), std::invalid_argument);
}

TEST(Summaries, Columns) {
  const auto rows = summarize(run_preset(small("fig4", 3)));
  ASSERT_FALSE(rows.empty());
  for (const SummaryRow& row : rows) {
    EXPECT_EQ(row.trials_alt, 3u);
    EXPECT_EQ(row.trials_null, 3u);
    EXPECT_TRUE(row.type1.has_value());
    EXPECT_TRUE(row.type2.has_value());
    EXPECT_FALSE(row.type1_is.has_value());
  }
  const auto fig1 = summarize(run_preset(small("fig1", 3)));
  for (const SummaryRow& row : fig1) {
    EXPECT_TRUE(row.type1_is.has_value());
    EXPECT_FALSE(row.type2.has_value());
  }
}

TEST(BoostTable, MatchesReferenceValues) {
  const auto rows = boost_table(reference::kAlpha, 0.0);
  ASSERT_EQ(rows.size(), 25u);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_NEAR(rows[k].boost_factor, reference::kOneSided[k / 5][k % 5], 1e-4);
  }
  const std::string csv = boost_table_csv(rows, false);
  EXPECT_EQ(first_line(csv), "delta,wealth,boost_factor");
  EXPECT_EQ(count_lines(csv), 26u);
  EXPECT_EQ(first_line(boost_table_csv(boost_table(reference::kAlpha, 0.4), true)), "delta,wealth,nu,boost_factor");
}

TEST(Csv, FormatDouble) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e300), "1e+300");
  EXPECT_EQ(format_double(20.0), "20");
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(format_double(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(std::stod(format_double(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Csv, HeaderOnlyForEmptyInput) {
  const std::string csv = records_csv({});
  EXPECT_EQ(count_lines(csv), 1u);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(count_lines(summary_csv({})), 1u);
}

TEST(Csv, WriteFile) {
  const auto path = std::filesystem::temp_directory_path() / "seqboost_csv_test.csv";
  write_file(path.string(), "a,b\n1,2\n");
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(ss.str(), "a,b\n1,2\n");
  std::filesystem::remove(path);
  try {
    write_file("/nonexistent/dir/out.csv", "x");
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/out.csv"), std::string::npos);
  }
}
