#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include <json.hpp>

#include "apegen/formats.hpp"
#include "apegen/noising.hpp"
#include "apegen/pools.hpp"
#include "apegen/tagger.hpp"
#include "apegen/wordnet.hpp"

namespace httplib {
class Server;
}

namespace apegen {

enum class JobState { kQueued, kRunning, kDone, kFailed };

std::string_view job_state_name(JobState state);
std::optional<JobState> parse_job_state(std::string_view name);

// Which input layout a job was uploaded with.
enum class CorpusLayout { kTsv, kMoses };

struct Job {
  std::string id;
  std::uint64_t seq = 0;  // submission order
  JobState state = JobState::kQueued;
  NoiseConfig config;
  CorpusLayout layout = CorpusLayout::kTsv;
  std::size_t done = 0;
  std::size_t total = 0;
  std::int64_t created_at = 0;   // unix seconds
  std::int64_t finished_at = 0;  // 0 until done or failed
  std::string error;
  std::optional<Manifest> manifest;  // manifest of the jsonl artifact
};

nlohmann::ordered_json job_to_json(const Job& job);
Job job_from_json(const nlohmann::json& value);

// Read-only resources shared by every request and job.
struct ServiceResources {
  std::shared_ptr<const TaggerModel> tagger;
  std::shared_ptr<const WordnetDb> wordnet;
  // Pools used by preview unless the request asks for its own lines.
  std::shared_ptr<const ReplacementPools> demo_pools;
};

struct ServiceOptions {
  std::filesystem::path work_dir = "apegen-work";
  // When non-empty, every endpoint except health requires this value in the
  // X-Apegen-Token header.
  std::string auth_token;
  std::size_t max_queue = 64;
  std::size_t max_preview_lines = 200;
  // Finished jobs older than this are deleted; nullopt keeps them forever.
  std::optional<std::chrono::seconds> retention;
  unsigned generation_threads = 1;
};

// HTTP API plus a single-worker FIFO job queue persisted under work_dir.
class Service {
 public:
  Service(ServiceResources resources, ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Registers the /api routes.
  void mount(httplib::Server& server);

  // Starts and stops the job worker. stop() interrupts a running job between
  // batches and leaves it queued on disk so a restart resumes it.
  void start();
  void stop();

  // Blocks until the queue is empty and no job is running, or the timeout
  // passes. Returns true when idle.
  bool wait_idle(std::chrono::milliseconds timeout);

  std::optional<Job> job(const std::string& id) const;
  std::filesystem::path job_dir(const std::string& id) const;

  // Removes finished jobs past the retention window.
  void prune();

 private:
  struct Interrupted {};

  void load_jobs();
  void persist(const Job& job) const;
  void worker_loop();
  void run_job(const std::string& id);
  void update(const std::string& id, const std::function<void(Job&)>& change);
  std::string new_id();

  ServiceResources resources_;
  ServiceOptions options_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  std::uint64_t next_seq_ = 1;
  bool stopping_ = false;
  bool busy_ = false;
  std::thread worker_;
};

}  // namespace apegen
