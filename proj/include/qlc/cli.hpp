#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "qlc/sim.hpp"
#include "qlc/synth.hpp"

namespace qlc {

using ordered_json = nlohmann::ordered_json;

/* exit codes shared by every subcommand */
enum ExitCode : int {
  exit_ok = 0,
  exit_check_failed = 2,
  exit_config_error = 3,
  exit_synthesis_abort = 4,
};

struct RunConfig {
  std::string config_path;
  std::string synthesis_path; /* simulate only */
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  int workers = 1;
};

/* expected-value row loaded from the config "expected" section */
struct Expected {
  double value = 0.0;
  double tolerance = 0.0;
  bool relative = false;
};

struct LoadedConfig {
  PlantConfig plant;
  SimConfig sim;
  GridConfig defect_grid;
  double beta_init = 0.5;
  int max_halvings = 40;
  std::size_t estimate_samples = 50000;
  std::size_t gosl_pairs = 10000;
  std::size_t cmc_samples = 512;
  double cmc_tol = 1e-9;
  std::uint64_t seed = 1;
  std::map<std::string, Expected> expected;
};

/* parses and validates the JSON config; rejects unknown keys recursively
 * and throws config_error with the offending path */
LoadedConfig load_config(const std::string& path);

/* report rows carry the defining expression next to the number so emitted
 * artifacts are self-describing; adding an untagged number throws */
class Report {
 public:
  explicit Report(std::string title);

  void put(const std::string& key, double value, const std::string& formula);
  void put_int(const std::string& key, long long value, const std::string& formula);
  void put_bool(const std::string& key, bool value, const std::string& formula);
  void put_text(const std::string& key, const std::string& value);

  /* value/expected/tolerance/verdict row; returns the verdict */
  bool put_checked(const std::string& key, double value, const std::string& formula,
                   const Expected& expected);

  bool all_passed() const { return failures_ == 0; }
  std::size_t failures() const { return failures_; }

  const ordered_json& json() const { return doc_; }
  std::string render_text() const;
  void write(const std::string& path) const;

 private:
  ordered_json doc_;
  std::size_t failures_ = 0;
};

/* serialization helpers shared by synthesize and simulate */
ordered_json synthesis_to_json(const PlantConfig& cfg, const SynthesisResult& result);
SynthesisResult synthesis_from_json(const ordered_json& doc, const PlantConfig& cfg);

int cmd_constants(const RunConfig& run);
int cmd_check(const RunConfig& run);
int cmd_synthesize(const RunConfig& run);
int cmd_simulate(const RunConfig& run);

}  // namespace qlc
