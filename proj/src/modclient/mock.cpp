#include <httplib.h>

#include "mtmod/error.hpp"
#include "mtmod/modclient.hpp"
#include "mtmod/unicode.hpp"

namespace mtmod {

MockMode parse_mock_mode(std::string_view s) {
  const std::string v = unicode::ascii_lower(s);
  if (v == "always-toxic" || v == "toxic") return MockMode::AlwaysToxic;
  if (v == "always-benign" || v == "benign" || v == "non-toxic") return MockMode::AlwaysBenign;
  if (v == "sidecar" || v == "sidecar-lexicon") return MockMode::SidecarLexicon;
  throw ConfigError("unknown mock mode '" + std::string(s) + "' (always-toxic, always-benign, sidecar)");
}

Label mock_label(const MockConfig& cfg, const std::string& ground_truth) {
  switch (cfg.mode) {
    case MockMode::AlwaysToxic: return Label::Toxic;
    case MockMode::AlwaysBenign: return Label::NonToxic;
    case MockMode::SidecarLexicon: break;
  }
  const std::string text = unicode::ascii_lower(ground_truth);
  for (const std::string& w : cfg.words)
    if (!w.empty() && text.find(unicode::ascii_lower(w)) != std::string::npos) return Label::Toxic;
  return Label::NonToxic;
}

MockModerationServer::MockModerationServer(MockConfig cfg)
    : cfg_(std::move(cfg)), served_(std::make_shared<std::atomic<std::size_t>>(0)) {}

MockModerationServer::~MockModerationServer() { stop(); }

void MockModerationServer::start() {
  if (server_) return;
  server_ = std::make_unique<httplib::Server>();
  // httplib defaults to SO_REUSEPORT, which would let a second server share
  // an occupied port instead of failing.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server_->Post("/moderate", [cfg = cfg_, served = served_](const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data() || !req.has_file("image") || req.get_file_value("image").content.empty()) {
      res.status = 400;
      res.set_content(R"({"error":"multipart field 'image' is required"})", "application/json");
      return;
    }
    const std::string truth = req.has_file("ground_truth") ? req.get_file_value("ground_truth").content : "";
    ++*served;
    res.set_content(json{{"label", std::string(to_string(mock_label(cfg, truth)))}}.dump(), "application/json");
  });
  if (cfg_.port == 0) {
    port_ = server_->bind_to_any_port(cfg_.host);
  } else {
    port_ = server_->bind_to_port(cfg_.host, cfg_.port) ? cfg_.port : -1;
  }
  if (port_ <= 0) {
    server_.reset();
    throw BindError("cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
  }
  thread_ = std::thread([s = server_.get()] { s->listen_after_bind(); });
  server_->wait_until_ready();
}

void MockModerationServer::stop() {
  if (!server_) return;
  server_->stop();
  if (thread_.joinable()) thread_.join();
  server_.reset();
}

void MockModerationServer::wait() {
  if (thread_.joinable()) thread_.join();
}

std::string MockModerationServer::base_url() const { return "http://" + cfg_.host + ":" + std::to_string(port_); }

std::size_t MockModerationServer::requests_served() const { return served_->load(); }

}  // namespace mtmod
