// xlnews: train-lda | topic-matrix | cluster | evaluate | pipeline
//
//   xlnews <subcommand> --config <path> [--mode coarse|fine] [--seed N]
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or config error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xlnews/pipeline.hpp"

namespace {

enum class Command { train_lda, topic_matrix, cluster, evaluate, pipeline };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross-lingual streaming news clustering"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode_name;
  std::optional<std::uint64_t> seed;
  Command command{};

  auto add = [&](const char* name, const char* help, Command c, bool with_mode) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Pipeline config (JSON)")->required();
    sub->add_option("--seed", seed, "Override the LDA random seed");
    if (with_mode) {
      sub->add_option("--mode", mode_name, "Clustering granularity")
          ->check(CLI::IsMember({"coarse", "fine"}));
    }
    sub->callback([&command, c] { command = c; });
  };
  add("train-lda", "Train the topic model and write the topic-word matrix", Command::train_lda, false);
  add("topic-matrix", "Build the topic similarity matrix", Command::topic_matrix, false);
  add("cluster", "Cluster the article stream", Command::cluster, true);
  add("evaluate", "Score a clustering against gold labels", Command::evaluate, false);
  add("pipeline", "Run every stage in order", Command::pipeline, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    xlnews::PipelineConfig cfg = xlnews::PipelineConfig::load(config_path);
    if (seed) cfg.lda.seed = *seed;
    const xlnews::ClusterMode mode =
        mode_name.empty() ? cfg.mode : xlnews::parse_cluster_mode(mode_name);
    switch (command) {
      case Command::train_lda: xlnews::cmd_train_lda(cfg, std::cout); break;
      case Command::topic_matrix: xlnews::cmd_topic_matrix(cfg, std::cout); break;
      case Command::cluster: xlnews::cmd_cluster(cfg, mode, std::cout); break;
      case Command::evaluate: xlnews::cmd_evaluate(cfg, std::cout); break;
      case Command::pipeline: xlnews::cmd_pipeline(cfg, mode, std::cout); break;
    }
  } catch (const xlnews::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
