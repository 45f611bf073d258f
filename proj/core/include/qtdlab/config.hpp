#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtdlab/env_suite.hpp"
#include "qtdlab/harness.hpp"
#include "qtdlab/mrp.hpp"

namespace qtdlab {

/// Raised on malformed config input; the message carries file/line/field
/// diagnostics.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Flat structured-text document:
///
///   # comment
///   [section]
///   key = value            values are scalars or whitespace-separated lists
///   row.0 = 0.2 0.8        indexed keys encode arrays of rows
///
/// Order inside a section is preserved; duplicate keys are rejected.
class ConfigDoc {
  public:
    struct Entry {
        std::string key;
        std::string value;
        int line = 0;
    };

    static ConfigDoc parse(const std::string& text, const std::string& source_name = "<string>");
    static ConfigDoc parse_file(const std::string& path);

    bool has_section(const std::string& section) const;
    const std::vector<Entry>& section(const std::string& section) const;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
    std::string get_or(const std::string& section, const std::string& key,
                       const std::string& fallback) const;

    double get_double(const std::string& section, const std::string& key) const;
    long long get_int(const std::string& section, const std::string& key) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
    std::vector<int> get_ints(const std::string& section, const std::string& key) const;

    const std::string& source_name() const { return source_; }

  private:
    [[noreturn]] void fail(const std::string& section, const std::string& key,
                           const std::string& what) const;

    std::string source_;
    std::vector<std::string> order_;
    std::map<std::string, std::vector<Entry>> sections_;
};

/// [env] section <-> EnvSpec.
EnvSpec env_spec_from_config(const ConfigDoc& doc);
std::string env_spec_to_config(const EnvSpec& spec);

/// Whole experiment file ([env] + [experiment]) <-> ExperimentConfig.
ExperimentConfig experiment_from_config(const ConfigDoc& doc);
std::string experiment_to_config(const ExperimentConfig& config);

/// Applies only the [experiment] section onto cfg; used when the
/// environment comes from a realized MRP file instead of [env].
void apply_experiment_section(const ConfigDoc& doc, ExperimentConfig& cfg);

/// Realized MRP <-> the [mrp]/[transition]/[rewards] sections. Values are
/// written with 17 significant digits so a round trip is bit-exact.
std::string mrp_to_config(const Mrp& mrp);
Mrp mrp_from_config(const ConfigDoc& doc);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace qtdlab
