#include "seqboost/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>

namespace seqboost {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

class Row {
 public:
  Row& operator<<(const std::string& s) { return field(s); }
  Row& operator<<(const char* s) { return field(s); }
  Row& operator<<(double v) { return field(format_double(v)); }
  Row& operator<<(std::size_t v) { return field(std::to_string(v)); }
  Row& operator<<(const std::optional<double>& v) { return field(v ? format_double(*v) : std::string()); }

  std::string str() const { return line_ + "\n"; }

 private:
  Row& field(const std::string& s) {
    if (!first_) line_ += ',';
    first_ = false;
    line_ += s;
    return *this;
  }

  std::string line_;
  bool first_ = true;
};

std::optional<double> value_of(const std::optional<Estimate>& e) {
  return e ? std::optional<double>(e->value) : std::nullopt;
}

std::optional<double> se_of(const std::optional<Estimate>& e) {
  return e ? std::optional<double>(e->standard_error) : std::nullopt;
}

}  // namespace

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::string out =
      "preset,grid_index,delta,beta,population,trial,seed,method,sampled_under,stopping_time,decision,"
      "raw_lr_at_stop,boosted_wealth_at_stop,guard_fallbacks,max_verified_expectation\n";
  for (const TrialRecord& r : records) {
    Row row;
    row << r.preset << r.grid_index << r.point.delta << r.point.beta << r.point.population << r.trial
        << std::to_string(r.seed) << r.method << r.sampled_under << r.stopping_time << to_string(r.decision)
        << r.raw_lr_at_stop << r.boosted_wealth_at_stop << r.guard_fallbacks << r.max_verified_expectation;
    out += row.str();
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out =
      "grid_index,delta,beta,population,method,trials_alt,trials_null,mean_n,mean_n_se,mean_n_null,"
      "mean_n_null_se,type1_hat,type1_se,type1_is,type1_is_se,type2_hat,type2_se,guard_fallbacks\n";
  for (const SummaryRow& s : rows) {
    Row row;
    row << s.grid_index << s.point.delta << s.point.beta << s.point.population << s.method << s.trials_alt
        << s.trials_null;
    if (s.trials_alt > 0) {
      row << s.sample_size_alt.value << s.sample_size_alt.standard_error;
    } else {
      row << "" << "";
    }
    if (s.trials_null > 0) {
      row << s.sample_size_null.value << s.sample_size_null.standard_error;
    } else {
      row << "" << "";
    }
    row << value_of(s.type1) << se_of(s.type1) << value_of(s.type1_is) << se_of(s.type1_is) << value_of(s.type2)
        << se_of(s.type2) << s.guard_fallbacks;
    out += row.str();
  }
  return out;
}

std::string boost_table_csv(const std::vector<BoostTableRow>& rows, bool with_nu) {
  std::string out = with_nu ? "delta,wealth,nu,boost_factor\n" : "delta,wealth,boost_factor\n";
  for (const BoostTableRow& r : rows) {
    Row row;
    row << r.delta << r.wealth;
    if (with_nu) row << r.nu;
    row << r.boost_factor;
    out += row.str();
  }
  return out;
}

std::string bound_table_csv(const std::vector<BoundTableRow>& rows) {
  std::string out = "t,robbins_lower,boosted_lower\n";
  for (const BoundTableRow& r : rows) {
    Row row;
    row << r.t << r.robbins_lower << r.boosted_lower;
    out += row.str();
  }
  return out;
}

std::string trajectory_csv(const BoundTrajectory& tr) {
  std::string out = "t,mean,robbins_lower,boosted_lower,robbins_upper,boosted_upper\n";
  for (std::size_t i = 0; i < tr.mean.size(); ++i) {
    Row row;
    row << i + 1 << tr.mean[i] << tr.robbins_lower[i] << tr.lower[i] << tr.robbins_upper[i] << tr.upper[i];
    out += row.str();
  }
  return out;
}

std::string steps_csv(const std::vector<StepLog>& steps) {
  std::string out = "t,observation,raw_factor,boost,boost_inv,nu,wealth,raw_wealth,wealth_inv,verified_expectation\n";
  for (const StepLog& s : steps) {
    Row row;
    row << s.t << s.observation << s.raw_factor << s.boost << s.boost_inv << s.nu << s.wealth << s.raw_wealth
        << s.wealth_inv << s.verified_expectation;
    out += row.str();
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace seqboost
