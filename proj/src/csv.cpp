#include "ellipfuse/csv.hpp"

#include <charconv>
#include <fstream>

#include "ellipfuse/errors.hpp"

namespace ellipfuse {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_step_csv(std::ostream& os, const std::vector<StepRecord>& records) {
    os << kStepCsvHeader << '\n';
    for (const StepRecord& r : records) {
        os << r.run_id << ',' << r.step << ',' << r.agent_id << ',' << r.method << ','
           << format_double(r.err_m) << ',' << format_double(r.det_p) << ','
           << format_double(r.est_x) << ',' << format_double(r.est_y) << ','
           << format_double(r.p_xx) << ',' << format_double(r.p_xy) << ','
           << format_double(r.p_yy) << ',' << r.n_meas << ',' << r.n_comm_accepted << ','
           << r.n_comm_discarded << '\n';
    }
}

void write_step_csv_file(const std::string& path, const std::vector<StepRecord>& records) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open for writing: " + path);
    }
    write_step_csv(out, records);
    if (!out.good()) {
        throw IoError("write failed: " + path);
    }
}

} // namespace ellipfuse
