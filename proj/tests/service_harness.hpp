#pragma once

#include <httplib.h>

#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "apegen/service.hpp"
#include "support.hpp"

namespace apegen::test {

inline ServiceResources bundled_service_resources() {
  static const auto tagger = std::make_shared<const TaggerModel>(bundled_tagger());
  static const auto wordnet = std::make_shared<const WordnetDb>(bundled_wordnet());
  static const auto pools = std::make_shared<const ReplacementPools>(demo_pools());
  return {tagger, wordnet, pools};
}

// Service mounted on a loopback server with an ephemeral port.
class ServiceHarness {
 public:
  explicit ServiceHarness(ServiceOptions options,
                          ServiceResources resources = bundled_service_resources(),
                          bool start_worker = true)
      : service_(std::move(resources), std::move(options)) {
    service_.mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    if (start_worker) service_.start();
  }
  ~ServiceHarness() {
    server_.stop();
    thread_.join();
    service_.stop();
  }
  ServiceHarness(const ServiceHarness&) = delete;
  ServiceHarness& operator=(const ServiceHarness&) = delete;

  Service& service() { return service_; }

  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_connection_timeout(2);
    c.set_read_timeout(120);
    return c;
  }

 private:
  Service service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

inline httplib::MultipartFormDataItems job_form(const std::string& scheme,
                                                const std::string& ratio,
                                                const std::string& seed,
                                                const std::string& corpus_tsv) {
  return {{"scheme", scheme, "", ""},
          {"ratio", ratio, "", ""},
          {"seed", seed, "", ""},
          {"corpus_tsv", corpus_tsv, "corpus.tsv", "text/tab-separated-values"}};
}

}  // namespace apegen::test
