#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "tts/pipeline.hpp"

namespace tts {

struct HttpReply {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    std::map<std::string, std::string> headers;
};

// JSON-over-HTTP front end. Resources and banks are read-only; settings live
// in a named store whose documents are replaced atomically.
//
//   GET  /health              liveness and loaded banks
//   GET  /banks               bank summaries with completeness
//   GET  /settings[?name=]    settings document
//   PUT  /settings[?name=]    replace (full document, validated)
//   POST /preprocess          {"text"} -> token/tag/pronunciation rows
//   POST /synthesize          {"text", "settings"?, "seed"?, "bank"?, "plan_only"?} -> audio/wav or plan JSON
//   POST /curve/preview       {"curve", "lo"?, "hi"?, "n"?} -> sampled points
class Service {
public:
    Service(const Resources& res, std::map<std::string, DiphoneBank> banks, std::string default_bank,
            ProsodySettings settings);

    HttpReply handle(const std::string& method, const std::string& path, const std::string& body,
                     const std::map<std::string, std::string>& query = {}) const;

    // Blocks until stop() is called from another thread.
    void serve(const std::string& host, int port);
    void stop();
    bool running() const;

    std::shared_ptr<const ProsodySettings> settings(const std::string& name = "default") const;

private:
    HttpReply health() const;
    HttpReply banks() const;
    HttpReply get_settings(const std::string& name) const;
    HttpReply put_settings(const std::string& name, const std::string& body) const;
    HttpReply preprocess_text(const std::string& body) const;
    HttpReply synthesize_text(const std::string& body) const;
    HttpReply curve_preview(const std::string& body) const;

    const Resources& res_;
    std::map<std::string, DiphoneBank> banks_;
    std::string default_bank_;
    mutable std::mutex mu_;
    mutable std::map<std::string, std::shared_ptr<const ProsodySettings>> store_;
    std::shared_ptr<void> server_;  // httplib::Server while serving
};

nlohmann::json plan_json(const SynthResult& r);

}  // namespace tts
