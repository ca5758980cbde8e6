#include "apegen/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>

#include "apegen/corpus.hpp"
#include "apegen/error.hpp"
#include "apegen/pipeline.hpp"
#include "apegen/zip.hpp"

namespace apegen {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 4> kJobStateNames = {"queued", "running", "done",
                                                            "failed"};
constexpr std::string_view kPrefix = "train";
constexpr std::size_t kJobBatch = 256;
constexpr std::size_t kReportedIssues = 20;

std::int64_t unix_now() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Failure that maps onto an HTTP status.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  ordered_json extra = nullptr;
};

[[noreturn]] void fail(int status, std::string code, std::string message,
                       ordered_json extra = nullptr) {
  throw HttpError{status, std::move(code), std::move(message), std::move(extra)};
}

void send_json(httplib::Response& res, int status, const ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const HttpError& e) {
  ordered_json body;
  body["error"] = {{"code", e.code}, {"message", e.message}};
  if (!e.extra.is_null()) body["report"] = e.extra;
  send_json(res, e.status, body);
}

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kEmptyInput:
      return 400;
    default:
      return 422;
  }
}

// Wraps a handler so that HttpError and library errors become JSON bodies.
template <typename F>
httplib::Server::Handler guarded(F&& handler) {
  return [handler = std::forward<F>(handler)](const httplib::Request& req,
                                             httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const HttpError& e) {
      send_error(res, e);
    } catch (const Error& e) {
      send_error(res, {status_for(e.code()), std::string(error_code_name(e.code())), e.what()});
    } catch (const std::exception& e) {
      send_error(res, {500, "InternalError", e.what()});
    }
  };
}

NoiseScheme scheme_from(std::string_view text) {
  const auto scheme = parse_scheme(text);
  if (!scheme) {
    fail(400, "InvalidArgument",
         "scheme must be one of random, semantic, morphemic, syntactic");
  }
  return *scheme;
}

double ratio_from_text(const std::string& text) {
  double value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(400, "InvalidArgument", "ratio must be a number in [0, 1]");
  }
  return value;
}

std::uint64_t seed_from_text(const std::string& text) {
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    fail(400, "InvalidArgument", "seed must be an unsigned 64-bit integer");
  }
  return value;
}

void check_ratio(double ratio) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) {
    fail(400, "InvalidArgument", "ratio must be a number in [0, 1]");
  }
}

NoiseConfig config_from_json(const json& body) {
  NoiseConfig config;
  if (!body.contains("scheme") || !body["scheme"].is_string()) {
    fail(400, "InvalidArgument", "scheme is required");
  }
  config.scheme = scheme_from(body["scheme"].get<std::string>());
  if (!body.contains("ratio") || !body["ratio"].is_number()) {
    fail(400, "InvalidArgument", "ratio is required and must be a number");
  }
  config.ratio = body["ratio"].get<double>();
  check_ratio(config.ratio);
  if (!body.contains("seed")) fail(400, "InvalidArgument", "seed is required");
  const json& seed = body["seed"];
  if (seed.is_number_unsigned()) {
    config.seed = seed.get<std::uint64_t>();
  } else if (seed.is_string()) {
    config.seed = seed_from_text(seed.get<std::string>());
  } else {
    fail(400, "InvalidArgument", "seed must be an unsigned 64-bit integer");
  }
  return config;
}

std::vector<std::string> lines_from_json(const json& body, const char* key) {
  const json& v = body[key];
  if (!v.is_array()) fail(400, "InvalidArgument", std::string(key) + " must be an array");
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_string()) {
      fail(400, "InvalidArgument", std::string(key) + " must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

ordered_json report_json(const ParallelCorpus* corpus, const std::string& message) {
  ordered_json report;
  report["message"] = message;
  if (corpus != nullptr) {
    report["total_lines"] = corpus->total_lines;
    report["valid_pairs"] = corpus->pairs.size();
    ordered_json issues = ordered_json::array();
    for (std::size_t i = 0; i < std::min(kReportedIssues, corpus->load_issues.size()); ++i) {
      issues.push_back({{"index", corpus->load_issues[i].index},
                        {"reason", corpus->load_issues[i].reason}});
    }
    report["issues"] = std::move(issues);
    report["issue_count"] = corpus->load_issues.size();
  }
  return report;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

ParallelCorpus load_job_corpus(const std::filesystem::path& dir, CorpusLayout layout) {
  if (layout == CorpusLayout::kTsv) return load_tsv(dir / "corpus.tsv");
  return load_moses(dir / "corpus.src", dir / "corpus.tgt");
}

std::string_view content_type(OutputFormat format) {
  switch (format) {
    case OutputFormat::kWmt:
      return "application/zip";
    case OutputFormat::kTsv:
      return "text/tab-separated-values; charset=utf-8";
    case OutputFormat::kJsonl:
      return "application/x-ndjson";
  }
  return "application/octet-stream";
}

}  // namespace

std::string_view job_state_name(JobState state) {
  return kJobStateNames[static_cast<std::size_t>(state)];
}

std::optional<JobState> parse_job_state(std::string_view name) {
  for (std::size_t i = 0; i < kJobStateNames.size(); ++i) {
    if (kJobStateNames[i] == name) return static_cast<JobState>(i);
  }
  return std::nullopt;
}

ordered_json job_to_json(const Job& job) {
  ordered_json out;
  out["id"] = job.id;
  out["seq"] = job.seq;
  out["state"] = job_state_name(job.state);
  out["config"] = {{"scheme", scheme_name(job.config.scheme)},
                   {"ratio", job.config.ratio},
                   {"seed", job.config.seed}};
  out["layout"] = job.layout == CorpusLayout::kTsv ? "tsv" : "moses";
  out["progress"] = {{"done", job.done}, {"total", job.total}};
  out["created_at"] = job.created_at;
  out["finished_at"] = job.finished_at;
  out["error"] = job.error.empty() ? ordered_json(nullptr) : ordered_json(job.error);
  out["manifest"] = job.manifest ? manifest_to_json(*job.manifest) : ordered_json(nullptr);
  if (job.state == JobState::kDone) {
    out["downloads"] = {"wmt_zip", "tsv", "jsonl"};
  } else {
    out["downloads"] = ordered_json::array();
  }
  return out;
}

Job job_from_json(const json& v) {
  Job job;
  job.id = v.at("id").get<std::string>();
  job.seq = v.at("seq").get<std::uint64_t>();
  const auto state = parse_job_state(v.at("state").get<std::string>());
  if (!state) throw Error(ErrorCode::kParseError, "unknown job state");
  job.state = *state;
  const json& config = v.at("config");
  const auto scheme = parse_scheme(config.at("scheme").get<std::string>());
  if (!scheme) throw Error(ErrorCode::kParseError, "unknown scheme in job");
  job.config.scheme = *scheme;
  job.config.ratio = config.at("ratio").get<double>();
  job.config.seed = config.at("seed").get<std::uint64_t>();
  job.layout = v.at("layout").get<std::string>() == "moses" ? CorpusLayout::kMoses
                                                           : CorpusLayout::kTsv;
  job.done = v.at("progress").at("done").get<std::size_t>();
  job.total = v.at("progress").at("total").get<std::size_t>();
  job.created_at = v.at("created_at").get<std::int64_t>();
  job.finished_at = v.at("finished_at").get<std::int64_t>();
  if (v.at("error").is_string()) job.error = v.at("error").get<std::string>();
  if (v.at("manifest").is_object()) job.manifest = manifest_from_json(v.at("manifest"));
  return job;
}

Service::Service(ServiceResources resources, ServiceOptions options)
    : resources_(std::move(resources)), options_(std::move(options)) {
  std::filesystem::create_directories(options_.work_dir / "jobs");
  load_jobs();
  prune();
}

Service::~Service() { stop(); }

std::filesystem::path Service::job_dir(const std::string& id) const {
  return options_.work_dir / "jobs" / id;
}

void Service::persist(const Job& job) const {
  const auto dir = job_dir(job.id);
  const auto tmp = dir / "job.json.tmp";
  write_text(tmp, job_to_json(job).dump(2) + "\n");
  std::filesystem::rename(tmp, dir / "job.json");
}

void Service::load_jobs() {
  std::vector<Job> loaded;
  for (const auto& entry : std::filesystem::directory_iterator(options_.work_dir / "jobs")) {
    const auto path = entry.path() / "job.json";
    if (!std::filesystem::is_regular_file(path)) continue;
    try {
      std::ifstream in(path, std::ios::binary);
      loaded.push_back(job_from_json(json::parse(in)));
    } catch (const std::exception&) {
      continue;  // unreadable records are ignored, never fatal
    }
  }
  std::sort(loaded.begin(), loaded.end(),
            [](const Job& a, const Job& b) { return a.seq < b.seq; });
  for (auto& job : loaded) {
    next_seq_ = std::max(next_seq_, job.seq + 1);
    if (job.state == JobState::kQueued || job.state == JobState::kRunning) {
      job.state = JobState::kQueued;
      job.done = 0;
      persist(job);
      queue_.push_back(job.id);
    }
    jobs_.emplace(job.id, std::move(job));
  }
}

std::string Service::new_id() {
  static thread_local std::mt19937_64 engine{std::random_device{}()};
  for (;;) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(engine()));
    std::string id(buf);
    if (!jobs_.contains(id) && !std::filesystem::exists(job_dir(id))) return id;
  }
}

void Service::start() {
  std::lock_guard lock(mutex_);
  if (worker_.joinable()) return;
  stopping_ = false;
  worker_ = std::thread([this] { worker_loop(); });
}

void Service::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

bool Service::wait_idle(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  return cv_.wait_for(lock, timeout, [this] { return queue_.empty() && !busy_; });
}

std::optional<Job> Service::job(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void Service::update(const std::string& id, const std::function<void(Job&)>& change) {
  std::lock_guard lock(mutex_);
  Job& job = jobs_.at(id);
  change(job);
  persist(job);
}

void Service::prune() {
  if (!options_.retention) return;
  const std::int64_t cutoff = unix_now() - options_.retention->count();
  std::lock_guard lock(mutex_);
  for (auto it = jobs_.begin(); it != jobs_.end();) {
    const Job& job = it->second;
    const bool finished = job.state == JobState::kDone || job.state == JobState::kFailed;
    if (finished && job.finished_at <= cutoff) {
      std::error_code ec;
      std::filesystem::remove_all(job_dir(job.id), ec);
      it = jobs_.erase(it);
    } else {
      ++it;
    }
  }
}

void Service::worker_loop() {
  for (;;) {
    std::string id;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      id = queue_.front();
      queue_.pop_front();
      busy_ = true;
    }
    run_job(id);
    {
      std::lock_guard lock(mutex_);
      busy_ = false;
    }
    cv_.notify_all();
    prune();
  }
}

void Service::run_job(const std::string& id) {
  Job snapshot;
  update(id, [&](Job& job) {
    job.state = JobState::kRunning;
    job.done = 0;
    snapshot = job;
  });
  const auto dir = job_dir(id);
  try {
    const ParallelCorpus corpus = load_job_corpus(dir, snapshot.layout);
    update(id, [&](Job& job) { job.total = corpus.pairs.size(); });

    std::optional<ReplacementPools> pools;
    if (scheme_needs_pools(snapshot.config.scheme)) {
      if (!resources_.tagger) {
        throw Error(ErrorCode::kMissingResource, "no tagger model loaded");
      }
      pools = build_pools(corpus, *resources_.tagger);
    }
    NoiseResources view;
    view.tagger = resources_.tagger.get();
    view.wordnet = resources_.wordnet.get();
    view.pools = pools ? &*pools : nullptr;

    GenerateOptions options;
    options.jobs = options_.generation_threads;
    options.batch_size = kJobBatch;
    options.progress = [&](std::size_t done, std::size_t) {
      {
        std::lock_guard lock(mutex_);
        if (stopping_) throw Interrupted{};
      }
      update(id, [&](Job& job) { job.done = done; });
    };
    GenerationStats stats;
    const auto triplets = generate_all(corpus, snapshot.config, view, &stats, options);

    const std::string tagger_fp =
        resources_.tagger ? tagger_fingerprint(*resources_.tagger) : std::string();
    const Manifest base = make_manifest(snapshot.config, OutputFormat::kJsonl,
                                        std::string(kPrefix), corpus_fingerprint(corpus),
                                        tagger_fp);
    Manifest jsonl_manifest;
    for (OutputFormat format : {OutputFormat::kWmt, OutputFormat::kTsv, OutputFormat::kJsonl}) {
      Manifest m = write_to_directory(triplets, format,
                                      dir / "out" / std::string(format_name(format)), base,
                                      stats);
      if (format == OutputFormat::kJsonl) jsonl_manifest = std::move(m);
    }
    update(id, [&](Job& job) {
      job.state = JobState::kDone;
      job.finished_at = unix_now();
      job.manifest = jsonl_manifest;
    });
  } catch (const Interrupted&) {
    // Left queued on disk; the next start picks it up again.
    update(id, [&](Job& job) {
      job.state = JobState::kQueued;
      job.done = 0;
    });
  } catch (const std::exception& e) {
    update(id, [&](Job& job) {
      job.state = JobState::kFailed;
      job.finished_at = unix_now();
      job.error = e.what();
    });
  }
}

void Service::mount(httplib::Server& server) {
  if (!options_.auth_token.empty()) {
    server.set_pre_routing_handler([this](const httplib::Request& req,
                                          httplib::Response& res) {
      if (req.path == "/api/health") return httplib::Server::HandlerResponse::Unhandled;
      if (req.get_header_value("X-Apegen-Token") != options_.auth_token) {
        send_error(res, {401, "Unauthorized", "missing or wrong X-Apegen-Token header"});
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });
  }

  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server.Post("/api/preview", guarded([this](const httplib::Request& req,
                                             httplib::Response& res) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::exception& e) {
      fail(400, "InvalidArgument", std::string("request body is not valid JSON: ") + e.what());
    }
    if (!body.is_object()) fail(400, "InvalidArgument", "request body must be a JSON object");
    if (!body.contains("tgt_lines")) fail(400, "InvalidArgument", "tgt_lines is required");
    const auto tgt = lines_from_json(body, "tgt_lines");
    if (tgt.empty()) fail(400, "InvalidArgument", "tgt_lines must not be empty");
    if (tgt.size() > options_.max_preview_lines) {
      fail(413, "TooManyLines",
           "preview accepts at most " + std::to_string(options_.max_preview_lines) + " lines");
    }
    std::vector<std::string> src(tgt.size());
    if (body.contains("src_lines") && !body["src_lines"].is_null()) {
      src = lines_from_json(body, "src_lines");
      if (src.size() != tgt.size()) {
        fail(400, "InvalidArgument", "src_lines and tgt_lines differ in length");
      }
    }
    const NoiseConfig config = config_from_json(body);
    std::size_t n = tgt.size();
    if (body.contains("n") && !body["n"].is_null()) {
      if (!body["n"].is_number_unsigned()) {
        fail(400, "InvalidArgument", "n must be a non-negative integer");
      }
      n = std::min(n, body["n"].get<std::size_t>());
    }
    std::string pool_source = "demo";
    if (body.contains("pool_source")) {
      if (!body["pool_source"].is_string()) {
        fail(400, "InvalidArgument", "pool_source must be \"demo\" or \"request\"");
      }
      pool_source = body["pool_source"].get<std::string>();
      if (pool_source != "demo" && pool_source != "request") {
        fail(400, "InvalidArgument", "pool_source must be \"demo\" or \"request\"");
      }
    }

    NoiseResources view;
    view.tagger = resources_.tagger.get();
    view.wordnet = resources_.wordnet.get();
    std::optional<ReplacementPools> own_pools;
    if (scheme_needs_pools(config.scheme)) {
      if (pool_source == "request") {
        if (!resources_.tagger) {
          fail(422, "MissingResource", "no tagger model is loaded on the server");
        }
        ParallelCorpus corpus;
        for (std::size_t i = 0; i < tgt.size(); ++i) corpus.pairs.push_back({i, src[i], tgt[i]});
        corpus.total_lines = tgt.size();
        own_pools = build_pools(corpus, *resources_.tagger);
        view.pools = &*own_pools;
      } else {
        view.pools = resources_.demo_pools.get();
      }
    }
    try {
      check_resources(config, view);
    } catch (const Error& e) {
      fail(422, std::string(error_code_name(e.code())), e.what());
    }

    ordered_json triplets = ordered_json::array();
    for (std::size_t i = 0; i < n; ++i) {
      try {
        triplets.push_back(triplet_to_json(generate_triplet({i, src[i], tgt[i]}, config, view)));
      } catch (const Error& e) {
        fail(400, std::string(error_code_name(e.code())),
             "line " + std::to_string(i) + ": " + e.what());
      }
    }
    ordered_json out;
    out["triplets"] = std::move(triplets);
    out["pool_source"] = pool_source;
    send_json(res, 200, out);
  }));

  server.Post("/api/jobs", guarded([this](const httplib::Request& req,
                                          httplib::Response& res) {
    if (!req.is_multipart_form_data()) {
      fail(400, "InvalidArgument", "expected a multipart/form-data upload");
    }
    auto field = [&](const char* name) -> std::optional<std::string> {
      if (!req.has_file(name)) return std::nullopt;
      return req.get_file_value(name).content;
    };
    NoiseConfig config;
    const auto scheme = field("scheme");
    const auto ratio = field("ratio");
    const auto seed = field("seed");
    if (!scheme || !ratio || !seed) {
      fail(400, "InvalidArgument", "scheme, ratio and seed fields are required");
    }
    config.scheme = scheme_from(*scheme);
    config.ratio = ratio_from_text(*ratio);
    check_ratio(config.ratio);
    config.seed = seed_from_text(*seed);

    const auto tsv = field("corpus_tsv");
    const auto src = field("corpus_src");
    const auto tgt = field("corpus_tgt");
    if (!tsv && !(src && tgt)) {
      fail(400, "InvalidArgument", "upload corpus_tsv or both corpus_src and corpus_tgt");
    }
    if (scheme_needs_wordnet(config.scheme) && !resources_.wordnet) {
      fail(422, "MissingResource", "semantic scheme requires WordNet, which is not loaded");
    }
    if (!resources_.tagger) {
      fail(422, "MissingResource", "no tagger model is loaded on the server");
    }

    ParallelCorpus corpus;
    try {
      corpus = tsv ? parse_tsv(*tsv, "corpus_tsv")
                   : parse_moses(*src, *tgt, "corpus_src,corpus_tgt");
    } catch (const Error& e) {
      ParallelCorpus partial;
      if (tsv) {
        // Recount without the non-empty requirement for the report.
        std::size_t lines = 0;
        for (char c : *tsv) lines += c == '\n';
        if (!tsv->empty() && tsv->back() != '\n') ++lines;
        partial.total_lines = lines;
      }
      fail(422, std::string(error_code_name(e.code())), e.what(),
           report_json(tsv ? &partial : nullptr, e.what()));
    }
    if (scheme_needs_pools(config.scheme)) {
      try {
        const ReplacementPools pools = build_pools(corpus, *resources_.tagger);
        NoiseResources view{resources_.tagger.get(), resources_.wordnet.get(), &pools};
        check_resources(config, view);
      } catch (const Error& e) {
        fail(422, std::string(error_code_name(e.code())), e.what(),
             report_json(&corpus, e.what()));
      }
    }

    Job job;
    {
      std::lock_guard lock(mutex_);
      if (queue_.size() >= options_.max_queue) {
        fail(503, "QueueFull", "the job queue is full; retry later");
      }
      job.id = new_id();
      job.seq = next_seq_++;
    }
    job.config = config;
    job.layout = tsv ? CorpusLayout::kTsv : CorpusLayout::kMoses;
    job.total = corpus.pairs.size();
    job.created_at = unix_now();
    const auto dir = job_dir(job.id);
    std::filesystem::create_directories(dir);
    if (tsv) {
      write_text(dir / "corpus.tsv", *tsv);
    } else {
      write_text(dir / "corpus.src", *src);
      write_text(dir / "corpus.tgt", *tgt);
    }
    {
      std::lock_guard lock(mutex_);
      persist(job);
      jobs_.emplace(job.id, job);
      queue_.push_back(job.id);
    }
    cv_.notify_all();
    ordered_json out;
    out["job_id"] = job.id;
    out["report"] = report_json(&corpus, "accepted");
    send_json(res, 202, out);
  }));

  server.Get("/api/jobs", guarded([this](const httplib::Request&, httplib::Response& res) {
    std::vector<Job> all;
    {
      std::lock_guard lock(mutex_);
      for (const auto& [id, job] : jobs_) all.push_back(job);
    }
    std::sort(all.begin(), all.end(), [](const Job& a, const Job& b) { return a.seq < b.seq; });
    ordered_json list = ordered_json::array();
    for (const auto& job : all) list.push_back(job_to_json(job));
    send_json(res, 200, {{"jobs", std::move(list)}});
  }));

  server.Get(R"(/api/jobs/([^/]+))", guarded([this](const httplib::Request& req,
                                                    httplib::Response& res) {
    const auto found = job(req.matches[1]);
    if (!found) fail(404, "NotFound", "unknown job id");
    send_json(res, 200, job_to_json(*found));
  }));

  server.Get(R"(/api/jobs/([^/]+)/download)", guarded([this](const httplib::Request& req,
                                                             httplib::Response& res) {
    const std::string id = req.matches[1];
    const auto found = job(id);
    if (!found) fail(404, "NotFound", "unknown job id");
    const std::string format = req.has_param("format") ? req.get_param_value("format") : "";
    OutputFormat out_format;
    if (format == "wmt_zip") {
      out_format = OutputFormat::kWmt;
    } else if (format == "tsv") {
      out_format = OutputFormat::kTsv;
    } else if (format == "jsonl") {
      out_format = OutputFormat::kJsonl;
    } else {
      fail(400, "InvalidArgument", "format must be one of wmt_zip, tsv, jsonl");
    }
    if (found->state != JobState::kDone) {
      fail(409, "NotReady",
           "job is " + std::string(job_state_name(found->state)) + ", not done");
    }
    const auto dir = job_dir(id) / "out" / std::string(format_name(out_format));
    const Manifest manifest = read_manifest(dir);
    std::string body;
    std::string filename;
    if (out_format == OutputFormat::kWmt) {
      std::vector<ZipEntry> entries;
      for (const auto& name : manifest.files) entries.push_back({name, read_file(dir / name)});
      entries.push_back({"manifest.json", read_file(dir / "manifest.json")});
      body = make_zip(entries);
      filename = id + "-wmt.zip";
    } else {
      body = read_file(dir / manifest.files.at(0));
      filename = id + "-" + manifest.files.at(0);
    }
    res.status = 200;
    res.set_header("Content-Disposition", "attachment; filename=\"" + filename + "\"");
    res.set_content(std::move(body), std::string(content_type(out_format)));
  }));
}

}  // namespace apegen
