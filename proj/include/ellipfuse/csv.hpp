#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ellipfuse/netsim.hpp"

namespace ellipfuse {

/// Shortest round-trip decimal representation (std::to_chars), so CSV output
/// is byte-stable and parses back to the exact double.
std::string format_double(double v);

inline constexpr const char* kStepCsvHeader =
    "run_id,step,agent_id,method,err_m,det_P,est_x,est_y,P_xx,P_xy,P_yy,"
    "n_meas,n_comm_accepted,n_comm_discarded";

void write_step_csv(std::ostream& os, const std::vector<StepRecord>& records);

/// Writes to `path` atomically enough for our purposes (truncate + write);
/// throws IoError on failure.
void write_step_csv_file(const std::string& path, const std::vector<StepRecord>& records);

} // namespace ellipfuse
