#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "spindot/measurement.hpp"
#include "spindot/model.hpp"

namespace spindot {

/**
 * Flat key = value config text.  One assignment per line, '#' starts a
 * comment, blank lines ignored.  Parse errors carry line numbers.  Keys keep
 * insertion order; serialization is stable, so a serialized config (the run
 * manifest) reparses to an identical object.
 */
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse(std::string_view text, const std::string& origin = "<string>");
    static KeyValueConfig parse_file(const std::string& path);

    bool has(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    /// Typed getters; throw ConfigError on missing key or unparseable value.
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    std::int64_t get_int(const std::string& key) const;
    std::uint64_t get_uint(const std::string& key) const;
    bool get_bool(const std::string& key) const;

    /// Defaulted variants.
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
    std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Inserts or overwrites (last-wins, as for CLI --set overrides).
    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);
    void set_uint(const std::string& key, std::uint64_t value);
    void set_bool(const std::string& key, bool value);

    std::string serialize() const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    const std::string* find(const std::string& key) const;
};

/// A fully resolved run: model parameters, schedule, initial spin state,
/// seed and thresholds.  This is what the manifest records.
struct RunConfig {
    ModelParams params;
    InitialSpinState spin{0.64, 0.36, {0.48, 0.0}};

    double t_max = 2.0e4;       ///< coupled window (g on)
    double relax_time = 0.0;    ///< post-switch-off window (g = 0)
    std::size_t sample_count = 200;

    std::uint64_t seed = 1;
    std::size_t n_samples = 100000;

    double margin = 10.0;
    double offdiag_threshold = 1e-3;
    double threshold_fraction = 1.0 - std::exp(-1.0);
    double prep_temperature = std::numeric_limits<double>::infinity();
    bool force = false;

    /// Rejects unknown keys and invalid spin states at parse time.
    static RunConfig from_config(const KeyValueConfig& kv);
    KeyValueConfig to_config() const;

    MeasurementSchedule schedule() const;
    MeasurementOptions options() const;
};

/// Applies a "KEY=VALUE" override string (the CLI --set flag).
void apply_override(KeyValueConfig& kv, const std::string& assignment);

} // namespace spindot
