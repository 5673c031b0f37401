#ifndef HITTINGDIM_EXPERIMENT_HPP
#define HITTINGDIM_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

namespace hittingdim {

// Flat key=value configuration.  Values from later sources win (file, then
// --set overrides, then convenience flags); every run writes a manifest of
// the fully resolved configuration that reloads to a byte-identical rerun.
struct ExperimentConfig {
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback = "") const;
  double get_num(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  void set_default(const std::string& key, const std::string& value);

  static ExperimentConfig from_file(const std::string& path);
  void apply_override(const std::string& assignment);  // "key=value"
  std::string manifest_text() const;                   // sorted key=value lines
};

// exit codes: 0 success, 2 invalid configuration, 3 degenerate result
// (all trials censored / not enough signal), 4 verification failure
int run_experiment(ExperimentConfig config, const std::string& out_dir, int jobs,
                   bool quiet = false);

}  // namespace hittingdim

#endif
