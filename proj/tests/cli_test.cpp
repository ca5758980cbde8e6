#include <gtest/gtest.h>
#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

#include "apegen/formats.hpp"
#include "support.hpp"

extern char** environ;

namespace apegen {
namespace {

using test::TempDir;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunResult run(const std::string& args) {
  TempDir scratch;
  const auto out = scratch / "stdout";
  const auto err = scratch / "stderr";
  const std::string cmd = std::string("'") + APEGEN_TEST_CLI + "' " + args + " >'" +
                          out.string() + "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string demo() { return "'" + test::demo_corpus_path().string() + "'"; }

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

std::map<std::string, std::string> dir_contents(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    out[e.path().filename().string()] = slurp(e.path());
  }
  return out;
}

TEST(CliGenerate, WritesWmtFilesAndManifest) {
  TempDir dir;
  const auto r = run("generate --scheme random --ratio 0.3 --seed 42 --tsv " + demo() +
                     " --out '" + (dir / "out").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  for (const char* f : {"train.src", "train.mt", "train.pe", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / f)) << f;
  }
  EXPECT_EQ(count_lines(slurp(dir / "out" / "train.pe")), 1000u);
  const Manifest m = read_manifest(dir / "out");
  EXPECT_EQ(m.pair_count, 1000u);
  EXPECT_FALSE(m.timestamp.has_value());
  EXPECT_NE(r.out.find("pairs"), std::string::npos);
}

TEST(CliGenerate, RatioOutOfRangeIsUsageError) {
  TempDir dir;
  const auto r = run("generate --scheme random --ratio 1.5 --tsv " + demo() + " --out '" +
                     dir.path().string() + "'");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("UsageError"), std::string::npos) << r.err;
}

TEST(CliGenerate, SemanticWithoutWordnetIsDataError) {
  TempDir dir;
  const auto r = run("generate --scheme semantic --ratio 0.3 --tsv " + demo() + " --out '" +
                     dir.path().string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.err.rfind("MissingResource:", 0), 0u) << r.err;
}

TEST(CliGenerate, EmptyCorpusIsDataError) {
  TempDir dir;
  test::write_file(dir / "empty.tsv", "");
  const auto r = run("generate --scheme random --ratio 0.3 --tsv '" +
                     (dir / "empty.tsv").string() + "' --out '" + (dir / "o").string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.err.rfind("EmptyCorpus:", 0), 0u) << r.err;
}

TEST(CliGenerate, UnknownFlagAndMissingRatioRejected) {
  EXPECT_EQ(run("generate --scheme random --ratio 0.3 --tsv " + demo() + " --out x --bogus")
                .exit_code,
            1);
  EXPECT_EQ(run("generate --scheme random --tsv " + demo() + " --out x").exit_code, 1);
  EXPECT_EQ(run("frobnicate").exit_code, 1);
}

TEST(CliGenerate, MosesInputAndOtherFormats) {
  TempDir dir;
  std::ofstream src(dir / "s"), tgt(dir / "t");
  for (std::size_t i = 0; i < 50; ++i) {
    src << test::demo_corpus().pairs[i].src << '\n';
    tgt << test::demo_corpus().pairs[i].tgt << '\n';
  }
  src.close();
  tgt.close();
  for (const char* format : {"tsv", "jsonl"}) {
    const auto out = dir / format;
    const auto r = run(std::string("generate --scheme morphemic --ratio 0.5 --seed 1 --src '") +
                       (dir / "s").string() + "' --tgt '" + (dir / "t").string() + "' --out '" +
                       out.string() + "' --format " + format);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(count_lines(slurp(out / ("train." + std::string(format)))), 50u);
  }
}

TEST(CliGenerate, ByteIdenticalAcrossRunsAndWorkerCounts) {
  TempDir dir;
  const std::string wordnet = " --wordnet '" + test::wordnet_dir().string() + "'";
  for (const char* scheme : {"random", "semantic", "syntactic"}) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (const char* jobs : {"1", "8", "8"}) {
      const auto out = dir / (std::string(scheme) + jobs + std::to_string(outputs.size()));
      const auto r = run(std::string("generate --scheme ") + scheme +
                         " --ratio 0.4 --seed 9 --tsv " + demo() + wordnet + " --jobs " + jobs +
                         " --out '" + out.string() + "'");
      ASSERT_EQ(r.exit_code, 0) << r.err;
      outputs.push_back(dir_contents(out));
    }
    EXPECT_EQ(outputs[0], outputs[1]) << scheme;
    EXPECT_EQ(outputs[1], outputs[2]) << scheme;
  }
}

TEST(CliGenerate, PoolsCacheIsReused) {
  TempDir dir;
  const std::string common = "generate --scheme morphemic --ratio 0.3 --seed 2 --tsv " + demo() +
                             " --pools-cache '" + (dir / "pools.json").string() + "' --out '";
  ASSERT_EQ(run(common + (dir / "a").string() + "'").exit_code, 0);
  ASSERT_TRUE(std::filesystem::exists(dir / "pools.json"));
  ASSERT_EQ(run(common + (dir / "b").string() + "'").exit_code, 0);
  EXPECT_EQ(dir_contents(dir / "a"), dir_contents(dir / "b"));
}

TEST(CliGenerate, ConfigFileMirrorsFlags) {
  TempDir dir;
  test::write_file(dir / "run.toml", "scheme = \"random\"\nratio = 0.2\nseed = 5\n");
  const auto a = run("generate --config '" + (dir / "run.toml").string() + "' --tsv " + demo() +
                     " --out '" + (dir / "a").string() + "'");
  ASSERT_EQ(a.exit_code, 0) << a.err;
  const auto b = run("generate --scheme random --ratio 0.2 --seed 5 --tsv " + demo() +
                     " --out '" + (dir / "b").string() + "'");
  ASSERT_EQ(b.exit_code, 0);
  EXPECT_EQ(dir_contents(dir / "a"), dir_contents(dir / "b"));

  const auto c = run("generate --config '" + (dir / "run.toml").string() + "' --seed 6 --tsv " +
                     demo() + " --out '" + (dir / "c").string() + "'");
  ASSERT_EQ(c.exit_code, 0) << c.err;
  EXPECT_NE(dir_contents(dir / "a"), dir_contents(dir / "c"));
  EXPECT_EQ(run("generate --config '" + (dir / "missing.toml").string() + "' --tsv " + demo() +
                " --out '" + (dir / "d").string() + "'")
                .exit_code,
            1);
}

TEST(CliPreview, PrintsExactlyNBlocksDeterministically) {
  const std::string args = "preview --scheme random --ratio 0.5 --seed 3 --n 5 --tsv " + demo();
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.exit_code, 0) << a.err;
  std::size_t blocks = 0;
  for (std::size_t pos = 0; (pos = a.out.find("\n# ", pos)) != std::string::npos; ++pos) ++blocks;
  blocks += a.out.rfind("# ", 0) == 0;
  EXPECT_EQ(blocks, 5u);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("→"), std::string::npos);
}

TEST(CliPreview, ZeroCountPrintsNothing) {
  const auto r = run("preview --scheme random --ratio 0.5 --n 0 --tsv " + demo());
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliTrainTagger, SampleReachesHighTrainingAccuracy) {
  TempDir dir;
  const auto r = run("train-tagger --gold '" + test::sample100_path().string() +
                     "' --epochs 5 --out '" + (dir / "m.model").string() + "'");
  ASSERT_EQ(r.exit_code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "m.model"));
  const auto pos = r.out.find("accuracy");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_GE(std::stod(r.out.substr(pos + 8)), 0.99);
}

TEST(CliTrainTagger, MissingGoldAndNegativeEpochs) {
  TempDir dir;
  EXPECT_EQ(run("train-tagger --gold /nonexistent --out '" + (dir / "m").string() + "'").exit_code,
            2);
  EXPECT_EQ(run("train-tagger --gold '" + test::sample100_path().string() +
                "' --epochs -1 --out '" + (dir / "m").string() + "'")
                .exit_code,
            1);
}

TEST(CliTrainTagger, UnknownTagIsDataError) {
  TempDir dir;
  test::write_file(dir / "g.conll", "the\tDT\ncat\tXYZ\n");
  const auto r = run("train-tagger --gold '" + (dir / "g.conll").string() + "' --out '" +
                     (dir / "m").string() + "'");
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_EQ(r.err.rfind("UnknownTagInGold:", 0), 0u) << r.err;
}

int free_port() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

TEST(CliServe, AnswersHealthAndShutsDownOnSignal) {
  TempDir dir;
  const int port = free_port();
  const std::string port_text = std::to_string(port);
  const std::string work = (dir / "work").string();
  const std::string err = (dir / "err").string();
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, 2, err.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::vector<std::string> args{APEGEN_TEST_CLI, "serve", "--port", port_text, "--work-dir", work};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  ASSERT_EQ(posix_spawn(&pid, APEGEN_TEST_CLI, &actions, nullptr, argv.data(), environ), 0);
  posix_spawn_file_actions_destroy(&actions);

  httplib::Client client("127.0.0.1", port);
  client.set_connection_timeout(1);
  client.set_read_timeout(5);
  httplib::Result res;
  int status = 0;
  for (int i = 0; i < 100 && !(res = client.Get("/api/health")); ++i) {
    ASSERT_EQ(::waitpid(pid, &status, WNOHANG), 0) << "server exited early";
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, "{\"status\":\"ok\"}");

  // A second server on the same port must fail with a data error.
  const auto clash = run("serve --port " + port_text + " --work-dir '" + (dir / "w2").string() + "'");
  EXPECT_EQ(clash.exit_code, 2);
  EXPECT_EQ(clash.err.rfind("IoError:", 0), 0u) << clash.err;

  ASSERT_EQ(::kill(pid, SIGTERM), 0);
  pid_t done = 0;
  for (int i = 0; i < 100 && done == 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(100));
    done = ::waitpid(pid, &status, WNOHANG);
  }
  ASSERT_EQ(done, pid);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_NE(slurp(dir / "err").find("stopped"), std::string::npos);
}

}  // namespace
}  // namespace apegen
