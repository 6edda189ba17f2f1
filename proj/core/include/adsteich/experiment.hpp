#pragma once

// Batch experiment layer: parse hand-authored spec files, dispatch to the
// module operations, and persist rows.csv plus a structured-text envelope.
// Identical spec + seed produce byte-identical data rows; wall-clock and
// timestamps live only in the envelope.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adsteich/mess.hpp"

namespace ats::xp {

inline constexpr int kSchemaVersion = 1;

enum class Kind {
    SublemmaSweep,
    Prop2Scan,
    Prop4Scan,
    Prop5Scan,
    PropernessProbe,
    Prescribe,
    Forward,
};

std::string kind_name(Kind k);
Kind kind_from_name(const std::string& name);

struct Grid {
    double start = 0, step = 0;
    int count = 0;
    std::vector<double> values() const;
};

// Flat key/value experiment description. Units: lengths and twists in
// hyperbolic length, angle parameters in radians-equivalent boost units.
struct ExperimentSpec {
    Kind kind = Kind::Forward;
    std::uint64_t seed = 1;
    std::map<std::string, std::string> raw;

    double get_num(const std::string& key) const;
    double get_num(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_str(const std::string& key, const std::string& fallback) const;
    std::vector<double> get_vec(const std::string& key) const;
    std::vector<double> get_vec(const std::string& key,
                                const std::vector<double>& fallback) const;
    Grid get_grid(const std::string& key) const;
    bool has(const std::string& key) const;

    static ExperimentSpec parse(const std::string& text);
    static ExperimentSpec load(const std::string& path);
    void validate() const;
};

// Default spec text per experiment kind; these are the shipped scans.
std::string default_spec_text(Kind k);

struct ResultEnvelope {
    Kind kind = Kind::Forward;
    std::uint64_t seed = 0;
    int schema_version = kSchemaVersion;
    int library_version = 0;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::uint64_t> row_seeds;
    std::vector<std::string> notes;     // free-form findings (thresholds etc.)
    std::string spec_echo;
    double wall_seconds = 0;
    bool all_converged = true;

    std::string csv_text() const;       // deterministic data rows
    std::string envelope_text() const;  // carries the timestamp/wallclock
};

ResultEnvelope run(const ExperimentSpec& spec, int threads = 1);

// Writes rows.csv and envelope.txt under out_dir (created if needed).
void write_outputs(const ResultEnvelope& env, const std::string& out_dir);

} // namespace ats::xp
