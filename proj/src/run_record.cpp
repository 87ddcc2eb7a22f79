#include "nlns/run_record.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace nlns {

std::string run_record_header() { return "instance,seed,method,cost,wall_s,config"; }

std::string to_csv(const RunRecord& r) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), ",%llu,", static_cast<unsigned long long>(r.seed));
    std::string line = r.instance_id + buf + r.method;
    std::snprintf(buf, sizeof(buf), ",%.17g,%.3f,", r.cost, r.wall_s);
    line += buf;
    line += r.config_hash;
    return line;
}

void write_run_records(const std::vector<RunRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << run_record_header() << "\n";
    for (const auto& r : records) out << to_csv(r) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string config_hash(const std::string& canonical) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nlns
