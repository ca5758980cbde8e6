#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "apegen/formats.hpp"
#include "apegen/zip.hpp"
#include "service_harness.hpp"

namespace apegen {
namespace {

using nlohmann::json;
using test::job_form;
using test::ServiceHarness;
using test::TempDir;

constexpr auto kIdle = std::chrono::seconds(120);

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string demo_tsv() { return read_all(test::demo_corpus_path()); }

ServiceOptions options_in(const TempDir& dir) {
  ServiceOptions options;
  options.work_dir = dir / "work";
  return options;
}

json preview_body(std::vector<std::string> tgt, const std::string& scheme, double ratio,
                  std::uint64_t seed) {
  return {{"tgt_lines", std::move(tgt)}, {"scheme", scheme}, {"ratio", ratio}, {"seed", seed}};
}

httplib::Result post_json(httplib::Client& client, const std::string& path, const json& body) {
  return client.Post(path, body.dump(), "application/json");
}

std::string error_code_of(const httplib::Result& res) {
  return json::parse(res->body).at("error").at("code").get<std::string>();
}

std::string submit(httplib::Client& client, const std::string& scheme, const std::string& tsv,
                   const std::string& ratio = "0.3", const std::string& seed = "7") {
  const auto res = client.Post("/api/jobs", job_form(scheme, ratio, seed, tsv));
  EXPECT_TRUE(res);
  if (!res) return {};
  EXPECT_EQ(res->status, 202) << res->body;
  return json::parse(res->body).value("job_id", "");
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

TEST(ServicePreview, HealthAnswersOk) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const auto res = client.Get("/api/health");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(json::parse(res->body).at("status"), "ok");
}

TEST(ServicePreview, RatioZeroIsIdentityOnCanonicalLine) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  for (const char* scheme : {"random", "semantic", "morphemic", "syntactic"}) {
    const auto res = post_json(client, "/api/preview",
                               preview_body({"I like cats."}, scheme, 0.0, 1));
    ASSERT_TRUE(res);
    ASSERT_EQ(res->status, 200) << res->body;
    const auto t = json::parse(res->body).at("triplets").at(0);
    EXPECT_EQ(t.at("mt"), "I like cats.") << scheme;
    EXPECT_EQ(t.at("pe"), "I like cats.");
    EXPECT_EQ(t.at("src"), "");
    EXPECT_TRUE(t.at("edits").empty());
  }
}

TEST(ServicePreview, RatioZeroDetokenizesSpacedPunctuation) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const auto res = post_json(client, "/api/preview",
                             preview_body({"I like cats ."}, "random", 0.0, 1));
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto t = json::parse(res->body).at("triplets").at(0);
  EXPECT_EQ(t.at("pe"), "I like cats .");
  EXPECT_EQ(t.at("mt"), "I like cats.");
  EXPECT_TRUE(t.at("edits").empty());
}

TEST(ServicePreview, SameRequestSameBody) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const auto body = preview_body({"The cat sat on the mat.", "Dogs bark at night."}, "random",
                                 0.5, 11);
  const auto a = post_json(client, "/api/preview", body);
  const auto b = post_json(client, "/api/preview", body);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->status, 200);
  EXPECT_EQ(a->body, b->body);
}

TEST(ServicePreview, NLimitsTriplets) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  auto body = preview_body({"a b c.", "d e f.", "g h i."}, "morphemic", 0.3, 1);
  body["n"] = 2;
  const auto res = post_json(client, "/api/preview", body);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  EXPECT_EQ(json::parse(res->body).at("triplets").size(), 2u);
}

TEST(ServicePreview, BadParametersAre400) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const std::vector<json> bodies{
      preview_body({"a b."}, "random", 2.0, 1),
      preview_body({"a b."}, "random", -0.1, 1),
      preview_body({"a b."}, "shuffle", 0.3, 1),
      preview_body({}, "random", 0.3, 1),
      preview_body({""}, "random", 0.3, 1),
      json{{"scheme", "random"}, {"ratio", 0.3}, {"seed", 1}},
      json::array(),
  };
  for (const auto& body : bodies) {
    const auto res = post_json(client, "/api/preview", body);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << body.dump() << " -> " << res->body;
    EXPECT_TRUE(json::parse(res->body).at("error").contains("message"));
  }
  const auto garbage = client.Post("/api/preview", "{not json", "application/json");
  ASSERT_TRUE(garbage);
  EXPECT_EQ(garbage->status, 400);
}

TEST(ServicePreview, OverLineLimitIs413) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const auto at_limit = post_json(
      client, "/api/preview", preview_body(std::vector<std::string>(200, "a b."), "random", 0.3, 1));
  ASSERT_TRUE(at_limit);
  EXPECT_EQ(at_limit->status, 200);
  const auto over = post_json(
      client, "/api/preview", preview_body(std::vector<std::string>(201, "a b."), "random", 0.3, 1));
  ASSERT_TRUE(over);
  EXPECT_EQ(over->status, 413);
}

TEST(ServicePreview, SemanticWithoutWordnetIs422) {
  TempDir dir;
  auto resources = test::bundled_service_resources();
  resources.wordnet.reset();
  ServiceHarness h(options_in(dir), resources);
  auto client = h.client();
  const auto res = post_json(client, "/api/preview", preview_body({"a car."}, "semantic", 0.3, 1));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422);
  EXPECT_EQ(error_code_of(res), "MissingResource");
  const auto job = client.Post("/api/jobs", job_form("semantic", "0.3", "1", "x\ta car.\n"));
  ASSERT_TRUE(job);
  EXPECT_EQ(job->status, 422);
}

TEST(ServicePreview, RequestPoolsTooSmallIs422) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  auto body = preview_body({"same"}, "random", 0.5, 1);
  body["pool_source"] = "request";
  const auto res = post_json(client, "/api/preview", body);
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 422) << res->body;
  body["pool_source"] = "elsewhere";
  EXPECT_EQ(post_json(client, "/api/preview", body)->status, 400);
}

TEST(ServiceJobs, SubmitListAndDownloadAllFormats) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const std::string id = submit(client, "morphemic", demo_tsv());
  ASSERT_FALSE(id.empty());
  const auto list = client.Get("/api/jobs");
  ASSERT_TRUE(list);
  EXPECT_NE(list->body.find(id), std::string::npos);
  ASSERT_TRUE(h.service().wait_idle(kIdle));

  const auto status = client.Get("/api/jobs/" + id);
  ASSERT_TRUE(status);
  const auto job = json::parse(status->body);
  ASSERT_EQ(job.at("state"), "done") << status->body;
  const std::size_t pairs = job.at("manifest").at("pair_count").get<std::size_t>();
  EXPECT_EQ(pairs, test::demo_corpus().pairs.size());
  EXPECT_EQ(job.at("progress").at("done"), job.at("progress").at("total"));

  const auto jsonl = client.Get("/api/jobs/" + id + "/download?format=jsonl");
  ASSERT_TRUE(jsonl);
  ASSERT_EQ(jsonl->status, 200);
  EXPECT_EQ(line_count(jsonl->body), pairs);
  std::istringstream in(jsonl->body);
  EXPECT_EQ(read_jsonl(in, "download").size(), pairs);

  const auto tsv = client.Get("/api/jobs/" + id + "/download?format=tsv");
  ASSERT_TRUE(tsv);
  EXPECT_EQ(line_count(tsv->body), pairs);

  const auto zip = client.Get("/api/jobs/" + id + "/download?format=wmt_zip");
  ASSERT_TRUE(zip);
  ASSERT_EQ(zip->status, 200);
  EXPECT_EQ(zip->get_header_value("Content-Type"), "application/zip");
  const auto entries = read_stored_zip(zip->body);
  std::vector<std::string> names;
  for (const auto& e : entries) {
    names.push_back(e.name);
    if (e.name != "manifest.json") EXPECT_EQ(line_count(e.data), pairs) << e.name;
  }
  EXPECT_EQ(names,
            (std::vector<std::string>{"train.src", "train.mt", "train.pe", "manifest.json"}));
}

TEST(ServiceJobs, ErrorTable) {
  TempDir dir;
  ServiceHarness h(options_in(dir), test::bundled_service_resources(), false);
  auto client = h.client();

  EXPECT_EQ(client.Get("/api/jobs/0123456789abcdef")->status, 404);
  EXPECT_EQ(client.Get("/api/jobs/0123456789abcdef/download?format=jsonl")->status, 404);

  const auto empty = client.Post("/api/jobs", job_form("random", "0.3", "1", "a\t\n\tb\n"));
  ASSERT_TRUE(empty);
  EXPECT_EQ(empty->status, 422);
  const auto report = json::parse(empty->body).at("report");
  EXPECT_EQ(report.at("total_lines"), 2);

  EXPECT_EQ(client.Post("/api/jobs", job_form("random", "1.5", "1", "a\tb c.\n"))->status, 400);
  EXPECT_EQ(client.Post("/api/jobs", job_form("random", "x", "1", "a\tb c.\n"))->status, 400);
  EXPECT_EQ(client.Post("/api/jobs", job_form("random", "0.3", "-1", "a\tb c.\n"))->status, 400);
  EXPECT_EQ(client.Post("/api/jobs", "{}", "application/json")->status, 400);

  const std::string a = submit(client, "random", demo_tsv());
  const std::string b = submit(client, "random", demo_tsv());
  EXPECT_NE(a, b);
  EXPECT_EQ(client.Get("/api/jobs/" + a + "/download?format=xml")->status, 400);
  EXPECT_EQ(client.Get("/api/jobs/" + a + "/download")->status, 400);
  const auto early = client.Get("/api/jobs/" + a + "/download?format=jsonl");
  EXPECT_EQ(early->status, 409);
  EXPECT_EQ(error_code_of(early), "NotReady");
  EXPECT_EQ(json::parse(client.Get("/api/jobs/" + a)->body).at("state"), "queued");
}

TEST(ServiceJobs, PreviewMatchesFirstTripletOfOneLineJob) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const std::string src = "Die Katze sitzt auf der Matte.";
  const std::string tgt = "The black cat sat quietly on the old mat.";
  for (const char* scheme : {"random", "semantic", "morphemic", "syntactic"}) {
    // A one-line corpus cannot support random pools, so random uses a two-line vocabulary.
    const bool random = std::string(scheme) == "random";
    const std::string corpus =
        src + "\t" + tgt + "\n" + (random ? "x\tDogs bark loudly.\n" : std::string());
    const std::string id = submit(client, scheme, corpus, "0.5", "99");
    ASSERT_FALSE(id.empty()) << scheme;
    ASSERT_TRUE(h.service().wait_idle(kIdle));
    const auto jsonl = client.Get("/api/jobs/" + id + "/download?format=jsonl");
    ASSERT_TRUE(jsonl);
    ASSERT_EQ(jsonl->status, 200) << jsonl->body;
    const auto first = json::parse(jsonl->body.substr(0, jsonl->body.find('\n')));

    json body = preview_body({tgt}, scheme, 0.5, 99);
    body["src_lines"] = {src};
    body["pool_source"] = "request";
    if (random) body["tgt_lines"] = {tgt, "Dogs bark loudly."}, body["src_lines"] = {src, "x"};
    body["n"] = 1;
    const auto preview = post_json(client, "/api/preview", body);
    ASSERT_TRUE(preview);
    ASSERT_EQ(preview->status, 200) << preview->body;
    EXPECT_EQ(json::parse(preview->body).at("triplets").at(0), first) << scheme;
  }
}

TEST(ServiceJobs, MosesUpload) {
  TempDir dir;
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const httplib::MultipartFormDataItems form{
      {"scheme", "syntactic", "", ""},
      {"ratio", "0.4", "", ""},
      {"seed", "3", "", ""},
      {"corpus_src", "eins\nzwei\n", "c.src", "text/plain"},
      {"corpus_tgt", "The old man walked home.\nA young girl read a book.\n", "c.tgt",
       "text/plain"}};
  const auto res = client.Post("/api/jobs", form);
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 202) << res->body;
  EXPECT_EQ(json::parse(res->body).at("report").at("valid_pairs"), 2);
  ASSERT_TRUE(h.service().wait_idle(kIdle));
  const auto id = json::parse(res->body).at("job_id").get<std::string>();
  const auto job = json::parse(client.Get("/api/jobs/" + id)->body);
  EXPECT_EQ(job.at("state"), "done");
  EXPECT_EQ(job.at("layout"), "moses");
}

TEST(ServiceJobs, DoneJobsSurviveRestart) {
  TempDir dir;
  std::string id;
  std::string before;
  {
    ServiceHarness h(options_in(dir));
    auto client = h.client();
    id = submit(client, "random", demo_tsv());
    ASSERT_TRUE(h.service().wait_idle(kIdle));
    before = client.Get("/api/jobs/" + id + "/download?format=jsonl")->body;
  }
  ServiceHarness h(options_in(dir));
  auto client = h.client();
  const auto job = json::parse(client.Get("/api/jobs/" + id)->body);
  EXPECT_EQ(job.at("state"), "done");
  const auto after = client.Get("/api/jobs/" + id + "/download?format=jsonl");
  ASSERT_EQ(after->status, 200);
  EXPECT_EQ(after->body, before);
}

TEST(ServiceJobs, QueuedJobsResumeAfterRestart) {
  TempDir dir;
  std::string id;
  {
    ServiceHarness h(options_in(dir), test::bundled_service_resources(), false);
    auto client = h.client();
    id = submit(client, "syntactic", demo_tsv());
  }
  ServiceHarness h(options_in(dir));
  ASSERT_TRUE(h.service().wait_idle(kIdle));
  const auto job = h.service().job(id);
  ASSERT_TRUE(job);
  EXPECT_EQ(job->state, JobState::kDone);
  ASSERT_TRUE(job->manifest);
  EXPECT_EQ(job->manifest->pair_count, test::demo_corpus().pairs.size());
}

TEST(ServiceJobs, RetentionPrunesFinishedJobs) {
  TempDir dir;
  std::string id;
  {
    ServiceHarness h(options_in(dir));
    auto client = h.client();
    id = submit(client, "random", demo_tsv());
    ASSERT_TRUE(h.service().wait_idle(kIdle));
  }
  ASSERT_TRUE(std::filesystem::exists(dir / "work" / "jobs" / id));
  auto options = options_in(dir);
  options.retention = std::chrono::seconds(0);
  ServiceHarness h(options);
  EXPECT_FALSE(h.service().job(id));
  EXPECT_FALSE(std::filesystem::exists(dir / "work" / "jobs" / id));
}

TEST(ServiceJobs, FullQueueIs503) {
  TempDir dir;
  auto options = options_in(dir);
  options.max_queue = 1;
  ServiceHarness h(options, test::bundled_service_resources(), false);
  auto client = h.client();
  submit(client, "random", demo_tsv());
  const auto res = client.Post("/api/jobs", job_form("random", "0.3", "1", demo_tsv()));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 503);
}

TEST(ServiceAuth, TokenGuardsEverythingButHealth) {
  TempDir dir;
  auto options = options_in(dir);
  options.auth_token = "sesame";
  ServiceHarness h(options);
  auto client = h.client();
  EXPECT_EQ(client.Get("/api/health")->status, 200);
  const auto denied = client.Get("/api/jobs");
  EXPECT_EQ(denied->status, 401);
  EXPECT_EQ(error_code_of(denied), "Unauthorized");
  EXPECT_EQ(client.Get("/api/jobs", {{"X-Apegen-Token", "wrong"}})->status, 401);
  EXPECT_EQ(client.Get("/api/jobs", {{"X-Apegen-Token", "sesame"}})->status, 200);
}

}  // namespace
}  // namespace apegen
