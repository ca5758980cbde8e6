#include <httplib.h>

#include <CLI11.hpp>
#include <algorithm>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "apegen/corpus.hpp"
#include "apegen/error.hpp"
#include "apegen/formats.hpp"
#include "apegen/noising.hpp"
#include "apegen/pipeline.hpp"
#include "apegen/service.hpp"
#include "apegen/tagger.hpp"
#include "apegen/tokenizer.hpp"

namespace {

using namespace apegen;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string default_tagger_model() {
  if (const char* env = std::getenv("APEGEN_TAGGER_MODEL"); env != nullptr && *env != '\0') {
    return env;
  }
  return APEGEN_DEFAULT_TAGGER_MODEL;
}

struct GenerateFlags {
  std::string tsv;
  std::string src;
  std::string tgt;
  std::string scheme;
  double ratio = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "wmt";
  std::string prefix = "train";
  unsigned jobs = 1;
  bool drop_outliers = false;
  bool stamp = false;
  std::string wordnet;
  std::string tagger_model = default_tagger_model();
  std::string pools_cache;
  std::size_t n = 5;
};

void add_input_flags(CLI::App* cmd, GenerateFlags& f) {
  auto* tsv = cmd->add_option("--tsv", f.tsv, "Corpus with one <src>TAB<tgt> pair per line");
  auto* src = cmd->add_option("--src", f.src, "Source side, one sentence per line");
  auto* tgt = cmd->add_option("--tgt", f.tgt, "English target side, aligned with --src");
  src->needs(tgt);
  tgt->needs(src);
  tsv->excludes(src)->excludes(tgt);
  cmd->add_option("--scheme", f.scheme, "random | semantic | morphemic | syntactic")
      ->required()
      ->check(CLI::IsMember({"random", "semantic", "morphemic", "syntactic"}));
  cmd->add_option("--ratio", f.ratio, "Fraction of eligible units to replace")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--seed", f.seed, "Unsigned 64-bit seed");
  cmd->add_flag("--drop-outliers", f.drop_outliers,
                "Drop pairs whose length ratio falls outside [1/9, 9]");
  cmd->add_option("--wordnet", f.wordnet, "WordNet 3.0 dict directory (semantic scheme)");
  cmd->add_option("--tagger-model", f.tagger_model, "Tagger model file")
      ->capture_default_str();
  cmd->add_option("--pools-cache", f.pools_cache, "Replacement pool cache file");
}

ParallelCorpus load_input(const GenerateFlags& f) {
  ParallelCorpus corpus;
  if (!f.tsv.empty()) {
    corpus = load_tsv(f.tsv);
  } else if (!f.src.empty()) {
    corpus = load_moses(f.src, f.tgt);
  } else {
    throw CLI::RequiredError("--tsv or --src/--tgt");
  }
  const ValidationReport report = validate(corpus);
  if (!report.dropped_indices.empty()) {
    std::cerr << "note: dropped " << report.dropped_indices.size() << " malformed line(s)";
    for (std::size_t i = 0; i < std::min<std::size_t>(3, corpus.load_issues.size()); ++i) {
      std::cerr << (i == 0 ? "; " : ", ") << "line " << corpus.load_issues[i].index + 1
                << ": " << corpus.load_issues[i].reason;
    }
    std::cerr << '\n';
  }
  if (!report.length_ratio_outliers.empty()) {
    std::cerr << "note: " << report.length_ratio_outliers.size()
              << " length-ratio outlier(s)" << (f.drop_outliers ? " dropped" : " kept") << '\n';
    if (f.drop_outliers) corpus = drop_length_outliers(corpus, report);
  }
  if (corpus.pairs.empty()) throw Error(ErrorCode::kEmptyCorpus, "no pairs left to process");
  return corpus;
}

NoiseConfig config_of(const GenerateFlags& f) {
  NoiseConfig config;
  config.scheme = *parse_scheme(f.scheme);
  config.ratio = f.ratio;
  config.seed = f.seed;
  check_config(config);
  return config;
}

ResourcePaths paths_of(const GenerateFlags& f) {
  ResourcePaths paths;
  if (!f.tagger_model.empty()) paths.tagger_model = f.tagger_model;
  if (!f.wordnet.empty()) paths.wordnet_dir = f.wordnet;
  if (!f.pools_cache.empty()) paths.pools_cache = f.pools_cache;
  return paths;
}

int run_generate(const GenerateFlags& f) {
  const NoiseConfig config = config_of(f);
  const auto format = parse_format(f.format);
  const ParallelCorpus corpus = load_input(f);
  const LoadedResources loaded = load_resources(config.scheme, corpus, paths_of(f));

  Manifest manifest = make_manifest(config, *format, f.prefix, corpus_fingerprint(corpus),
                                    loaded.tagger_fingerprint);
  if (f.stamp) manifest.timestamp = utc_timestamp();
  GenerateOptions options;
  options.jobs = f.jobs;
  const RunResult result =
      generate_to_directory(corpus, config, loaded.view(), *format, f.out, manifest, options);

  const auto& m = result.manifest;
  const auto mean = result.stats.mean_realized_ratio(config.scheme);
  std::cout << "pairs       " << m.pair_count << '\n'
            << "edits       " << m.total_edits << '\n'
            << "shortfalls  " << m.shortfall_count << '\n'
            << "mean ratio  " << (mean ? std::to_string(*mean) : "n/a") << '\n'
            << "skipped     " << m.skipped.size() + m.generation_errors.size() << '\n';
  for (const auto& file : m.files) std::cout << "wrote       " << f.out << '/' << file << '\n';
  return kExitOk;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// PE tokens with every edited span shown as [original→replacement].
std::string marked_line(const ApeTriplet& t) {
  const auto pe = tokenize_words(t.pe);
  std::vector<std::string> parts;
  std::size_t e = 0;
  for (std::size_t i = 0; i < pe.size();) {
    if (e < t.edits.size() && t.edits[e].begin == i) {
      const Edit& edit = t.edits[e++];
      parts.push_back("[" + join(edit.original) + "→" + join(edit.replacement) + "]");
      i = edit.end;
    } else {
      parts.push_back(pe[i++]);
    }
  }
  return join(parts);
}

int run_preview(const GenerateFlags& f) {
  const NoiseConfig config = config_of(f);
  const ParallelCorpus corpus = load_input(f);
  const LoadedResources loaded = load_resources(config.scheme, corpus, paths_of(f));
  const NoiseResources view = loaded.view();
  check_resources(config, view);
  const std::size_t n = std::min(f.n, corpus.pairs.size());
  for (std::size_t i = 0; i < n; ++i) {
    const ApeTriplet t = generate_triplet(corpus.pairs[i], config, view);
    std::cout << "# " << t.sentence_index << "  edits " << t.actual_replacements << '/'
              << t.eligible << (t.shortfall ? "  shortfall" : "") << '\n'
              << "SRC  " << t.src << '\n'
              << "MT   " << t.mt << '\n'
              << "PE   " << t.pe << '\n'
              << "DIFF " << marked_line(t) << "\n\n";
  }
  return kExitOk;
}

int run_train_tagger(const std::string& gold_path, int epochs, const std::string& out) {
  const auto gold = read_gold(std::filesystem::path(gold_path));
  const TaggerModel model = train_tagger(gold, epochs);
  if (const auto parent = std::filesystem::path(out).parent_path(); !parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  model.save(std::filesystem::path(out));
  std::cout << "sentences  " << gold.size() << '\n'
            << "features   " << model.feature_count() << '\n'
            << "accuracy   " << tagging_accuracy(model, gold) << '\n';
  return kExitOk;
}

struct ServeFlags {
  std::string host = "127.0.0.1";
  int port = 9092;
  std::string wordnet;
  std::string tagger_model = default_tagger_model();
  std::string work_dir = "apegen-work";
  std::string demo_corpus = APEGEN_DEFAULT_DEMO_CORPUS;
  std::string token;
  double retention_hours = 0;
  unsigned threads = 1;
};

int run_serve(const ServeFlags& f) {
  ServiceResources resources;
  if (!f.tagger_model.empty() && std::filesystem::exists(f.tagger_model)) {
    resources.tagger =
        std::make_shared<const TaggerModel>(TaggerModel::load(std::filesystem::path(f.tagger_model)));
  } else {
    std::cerr << "warning: no tagger model; only health and errors will work\n";
  }
  if (!f.wordnet.empty()) {
    resources.wordnet = std::make_shared<const WordnetDb>(load_wordnet(f.wordnet));
  }
  if (resources.tagger && !f.demo_corpus.empty()) {
    resources.demo_pools = std::make_shared<const ReplacementPools>(
        build_pools(load_tsv(f.demo_corpus), *resources.tagger));
  }
  ServiceOptions options;
  options.work_dir = f.work_dir;
  options.auth_token = f.token;
  options.generation_threads = f.threads;
  if (f.retention_hours > 0) {
    options.retention = std::chrono::seconds(static_cast<long long>(f.retention_hours * 3600));
  }

  // Signals are taken synchronously by one thread so shutdown runs outside a
  // signal handler.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(resources, options);
  httplib::Server server;
  service.mount(server);
  // SO_REUSEPORT would let a second server share the port silently.
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  if (!server.bind_to_port(f.host, f.port)) {
    throw Error(ErrorCode::kIoError,
                "cannot bind " + f.host + ":" + std::to_string(f.port));
  }
  service.start();
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  std::cerr << "listening on http://" << f.host << ':' << f.port << '\n';
  server.listen_after_bind();
  service.stop();
  if (waiter.joinable()) {
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  }
  std::cerr << "stopped\n";
  return kExitOk;
}

// CLI11 only reads config files attached to the root app, so subcommand configs are
// expanded into trailing flags; flags given on the command line take precedence.
std::vector<std::string> with_config_defaults(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
                 args.begin() + static_cast<std::ptrdiff_t>(i + 2));
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (!path) return args;
  for (const CLI::ConfigItem& item : CLI::ConfigTOML().from_file(*path)) {
    if (!item.parents.empty() || item.name.empty()) {
      throw CLI::ConversionError("config key " + item.fullname() + " is not a flag");
    }
    std::string flag = "--" + item.name;
    std::replace(flag.begin(), flag.end(), '_', '-');
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.starts_with(flag + "=");
    });
    if (given) continue;
    std::string value;
    for (const auto& input : item.inputs) value += (value.empty() ? "" : ",") + input;
    args.push_back(flag + "=" + value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesizes automatic post-editing triplets from parallel corpora", "apegen"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "Write a full noised dataset");
  add_input_flags(generate, gen);
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--format", gen.format, "wmt | tsv | jsonl")
      ->check(CLI::IsMember({"wmt", "tsv", "jsonl"}))
      ->capture_default_str();
  generate->add_option("--prefix", gen.prefix, "Output file prefix")->capture_default_str();
  generate->add_option("--jobs", gen.jobs, "Worker threads, 0 for all cores")
      ->capture_default_str();
  generate->add_flag("--stamp", gen.stamp, "Record the UTC time in manifest.json");
  std::string config_path;
  generate->add_option("--config", config_path, "TOML file with the same keys as the flags");

  GenerateFlags pre;
  auto* preview = app.add_subcommand("preview", "Print the first triplets without writing files");
  add_input_flags(preview, pre);
  preview->add_option("--n", pre.n, "Number of triplets to print")->capture_default_str();
  preview->add_option("--config", config_path, "TOML file with the same keys as the flags");

  std::string gold;
  int epochs = 5;
  std::string model_out;
  auto* train = app.add_subcommand("train-tagger", "Train the part-of-speech tagger");
  train->add_option("--gold", gold, "Gold file, token TAB tag per line")->required();
  train->add_option("--epochs", epochs, "Training passes")
      ->check(CLI::Range(0, 1000))
      ->capture_default_str();
  train->add_option("--out", model_out, "Model output path")->required();

  ServeFlags srv;
  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  serve->add_option("--host", srv.host)->capture_default_str();
  serve->add_option("--port", srv.port)->check(CLI::Range(1, 65535))->capture_default_str();
  serve->add_option("--wordnet", srv.wordnet, "WordNet 3.0 dict directory");
  serve->add_option("--tagger-model", srv.tagger_model)->capture_default_str();
  serve->add_option("--work-dir", srv.work_dir)->capture_default_str();
  serve->add_option("--demo-corpus", srv.demo_corpus, "TSV corpus backing preview pools")
      ->capture_default_str();
  serve->add_option("--token", srv.token, "Require this X-Apegen-Token header");
  serve->add_option("--retention-hours", srv.retention_hours,
                    "Delete finished jobs older than this; 0 keeps them")
      ->check(CLI::NonNegativeNumber);
  serve->add_option("--threads", srv.threads, "Generation threads per job")
      ->capture_default_str();

  try {
    auto args = with_config_defaults(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "UsageError: " << e.what() << "\nRun with --help for more information.\n";
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return run_generate(gen);
    if (preview->parsed()) return run_preview(pre);
    if (train->parsed()) return run_train_tagger(gold, epochs, model_out);
    if (serve->parsed()) return run_serve(srv);
  } catch (const CLI::ParseError& e) {
    std::cerr << "UsageError: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::cerr << "InternalError: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
