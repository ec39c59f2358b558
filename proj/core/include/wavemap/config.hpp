#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace wavemap {

/// Flat key=value configuration with dotted namespaces (diff-friendly for
/// sweep provenance).  Every getter materializes its default, so echo()
/// reproduces the complete effective configuration, not just the keys the
/// user set.  Keys that were set but never consumed are reported as errors.
class KeyValueConfig {
  public:
    KeyValueConfig() = default;

    static KeyValueConfig from_file(const std::string& path);
    static KeyValueConfig from_string(const std::string& text);

    /// Applies one "key=value" assignment (--set on the command line).
    void set(const std::string& assignment);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return raw_.count(key) != 0; }

    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::string get_string(const std::string& key, const std::string& def) const;
    /// Comma-separated list of reals.
    std::vector<double> get_double_list(const std::string& key,
                                        const std::vector<double>& def) const;

    /// Throws ConfigError naming every set-but-unused key.
    void require_all_consumed() const;

    /// Sorted key=value dump of every materialized entry (defaults included).
    std::string echo() const;

    static std::string format_double(double v);

  private:
    std::string fetch(const std::string& key, const std::string& materialized_default) const;

    std::map<std::string, std::string> raw_;
    mutable std::map<std::string, std::string> materialized_;
    mutable std::set<std::string> consumed_;
};

}  // namespace wavemap
