// SPDX-License-Identifier: Apache-2.0
//
// contraflow run      --config <path> --stream <path|-> [--images <dir>] [--out <dir>]
// contraflow gen      --spec <path> --out <path> [--truth <path>]
// contraflow validate --stream <path|->
//
// Exit codes: 0 ok, 2 config error, 3 stream error, 4 sink error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "contraflow/contraflow.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kStreamError = 3;
constexpr int kSinkError = 4;

// Opens `path` or binds stdin for "-".
class InputStream {
 public:
  explicit InputStream(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw contraflow::StreamError("cannot open stream " + path);
    }
  }
  std::istream& get() { return file_.is_open() ? file_ : std::cin; }

 private:
  std::ifstream file_;
};

int cmd_run(const std::string& config_path, const std::string& stream_path, const std::string& images,
            const std::string& out) {
  contraflow::PipelineConfig cfg;
  try {
    cfg = contraflow::load_config(config_path);
  } catch (const contraflow::ConfigError& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kConfigError;
  }
  if (!out.empty()) cfg.sink.output_directory = out;

  std::optional<std::filesystem::path> image_dir;
  if (!images.empty()) image_dir = images;

  try {
    InputStream in(stream_path);
    const auto summary = contraflow::run(cfg, in.get(), image_dir);
    std::cout << contraflow::to_json(summary).dump() << '\n';
    return 0;
  } catch (const contraflow::StreamError& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kStreamError;
  } catch (const contraflow::SinkIoError& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kSinkError;
  } catch (const contraflow::DuplicateViolation& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kSinkError;
  } catch (const contraflow::ConfigError& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kConfigError;
  }
}

int cmd_gen(const std::string& spec_path, const std::string& out, const std::string& truth_path) {
  contraflow::Scenario scenario;
  try {
    scenario = contraflow::generate(contraflow::load_scenario(spec_path));
  } catch (const contraflow::InvalidSpec& e) {
    std::cerr << "contraflow: invalid scenario: " << e.what() << '\n';
    return kConfigError;
  }
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os || !(os << scenario.stream) || !os.flush()) {
    std::cerr << "contraflow: cannot write " << out << '\n';
    return kSinkError;
  }
  if (!truth_path.empty()) {
    std::ofstream ts(truth_path, std::ios::trunc);
    if (!ts || !(ts << contraflow::truth_to_json(scenario.truth).dump(2) << '\n')) {
      std::cerr << "contraflow: cannot write " << truth_path << '\n';
      return kSinkError;
    }
  }
  return 0;
}

int cmd_validate(const std::string& stream_path) {
  try {
    InputStream in(stream_path);
    contraflow::StreamReader reader(in.get());
    std::uint64_t frames = 0;
    while (reader.next()) ++frames;
    nlohmann::ordered_json j;
    j["valid"] = true;
    j["records"] = reader.lines_read();
    j["detections"] = reader.detections_read();
    j["frames"] = frames;
    std::cout << j.dump() << '\n';
    return 0;
  } catch (const contraflow::StreamError& e) {
    std::cerr << "contraflow: " << e.what() << '\n';
    return kStreamError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wrong-way vehicle detection over detection streams"};
  app.require_subcommand(1);

  std::string config_path, stream_path, images, out;
  auto* run = app.add_subcommand("run", "Track vehicles and record wrong-way violations");
  run->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  run->add_option("--stream", stream_path, "Detection stream, or - for stdin")->required();
  run->add_option("--images", images, "Directory of per-frame PNGs named by frame index");
  run->add_option("--out", out, "Output directory (overrides sink.output_directory)");

  std::string spec_path, gen_out, truth_path;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic detection stream");
  gen->add_option("--spec", spec_path, "Scenario spec (JSON)")->required();
  gen->add_option("--out", gen_out, "Output stream path")->required();
  gen->add_option("--truth", truth_path, "Optional ground-truth summary (JSON)");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a detection stream against the wire format");
  validate->add_option("--stream", validate_path, "Detection stream, or - for stdin")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  if (*run) return cmd_run(config_path, stream_path, images, out);
  if (*gen) return cmd_gen(spec_path, gen_out, truth_path);
  return cmd_validate(validate_path);
}
