#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "seqboost/confseq.hpp"
#include "seqboost/simkit.hpp"

namespace seqboost {

/// Raised when an output file cannot be written; the message names the path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal string that round-trips to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double value);

// All emitters produce a header row and LF line endings.
std::string records_csv(const std::vector<TrialRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string boost_table_csv(const std::vector<BoostTableRow>& rows, bool with_nu);
std::string bound_table_csv(const std::vector<BoundTableRow>& rows);
std::string trajectory_csv(const BoundTrajectory& trajectory);
std::string steps_csv(const std::vector<StepLog>& steps);

/// Writes `content` to `path`, replacing any existing file. Throws IoError.
void write_file(const std::string& path, const std::string& content);

}  // namespace seqboost
