#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nlns {

// One benchmark run: which instance, how it was solved, what it cost.
// wall_s is 0 for iteration-budgeted runs, which keeps the record files
// byte-reproducible.
struct RunRecord {
    std::string instance_id;
    uint64_t seed = 0;
    std::string method;
    double cost = 0;
    double wall_s = 0;
    std::string config_hash;
};

std::string run_record_header();
std::string to_csv(const RunRecord& record);
void write_run_records(const std::vector<RunRecord>& records, const std::string& path);

// FNV-1a hash of the canonical configuration string, printed by every CLI run
std::string config_hash(const std::string& canonical);

}  // namespace nlns
