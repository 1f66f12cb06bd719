#include "tts/service.hpp"

#include <httplib.h>

#include "tts/common.hpp"

namespace tts {

using nlohmann::json;

namespace {

HttpReply json_reply(const json& j, int status = 200) { return {status, "application/json", j.dump(), {}}; }

HttpReply error_reply(int status, const std::string& message) { return json_reply({{"error", message}}, status); }

json parse_body(const std::string& body) {
    try {
        return json::parse(body.empty() ? "{}" : body);
    } catch (const json::exception& e) {
        throw DataError(std::string("request body is not JSON: ") + e.what());
    }
}

std::string text_field(const json& j) {
    if (!j.is_object() || !j.contains("text") || !j.at("text").is_string())
        throw DataError("request needs a string field \"text\"");
    return j.at("text").get<std::string>();
}

}  // namespace

Service::Service(const Resources& res, std::map<std::string, DiphoneBank> banks, std::string default_bank,
                 ProsodySettings settings)
    : res_(res), banks_(std::move(banks)), default_bank_(std::move(default_bank)) {
    if (!banks_.empty() && !banks_.contains(default_bank_)) throw DataError("default bank '" + default_bank_ + "' not loaded");
    store_["default"] = std::make_shared<const ProsodySettings>(std::move(settings));
}

std::shared_ptr<const ProsodySettings> Service::settings(const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = store_.find(name);
    return it == store_.end() ? nullptr : it->second;
}

HttpReply Service::handle(const std::string& method, const std::string& path, const std::string& body,
                          const std::map<std::string, std::string>& query) const {
    try {
        auto name = query.contains("name") ? query.at("name") : std::string("default");
        if (method == "GET" && path == "/health") return health();
        if (method == "GET" && path == "/banks") return banks();
        if (method == "GET" && path == "/settings") return get_settings(name);
        if (method == "PUT" && path == "/settings") return put_settings(name, body);
        if (method == "POST" && path == "/preprocess") return preprocess_text(body);
        if (method == "POST" && path == "/synthesize") return synthesize_text(body);
        if (method == "POST" && path == "/curve/preview") return curve_preview(body);
        return error_reply(404, "no route for " + method + " " + path);
    } catch (const DataError& e) {
        return error_reply(400, e.what());
    } catch (const json::exception& e) {
        return error_reply(400, e.what());
    } catch (const std::exception& e) {
        return error_reply(500, e.what());
    }
}

HttpReply Service::health() const {
    json names = json::array();
    for (const auto& [n, b] : banks_) names.push_back(n);
    return json_reply({{"status", "ok"}, {"banks", names}, {"default_bank", default_bank_}});
}

HttpReply Service::banks() const {
    json out = json::array();
    for (const auto& [n, b] : banks_) {
        auto report = b.check();
        out.push_back({{"name", n},
                       {"sample_rate", b.sample_rate},
                       {"diphones", b.diphones.size()},
                       {"monophones", b.monophones.size()},
                       {"complete", report.complete()},
                       {"missing_diphones", report.missing_diphones.size()},
                       {"default", n == default_bank_}});
    }
    return json_reply(out);
}

HttpReply Service::get_settings(const std::string& name) const {
    auto s = settings(name);
    if (!s) return error_reply(404, "no settings named '" + name + "'");
    return json_reply(s->to_json());
}

HttpReply Service::put_settings(const std::string& name, const std::string& body) const {
    auto doc = std::make_shared<const ProsodySettings>(ProsodySettings::from_json(parse_body(body)));
    {
        std::lock_guard lock(mu_);
        store_[name] = doc;
    }
    return json_reply(doc->to_json());
}

HttpReply Service::preprocess_text(const std::string& body) const {
    auto toks = preprocess(text_field(parse_body(body)), res_);
    return json_reply({{"tokens", analysis_json(toks)}});
}

json plan_json(const SynthResult& r) {
    json tokens = json::array();
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        const auto& t = r.tokens[i];
        const auto& p = r.plan.tokens[i];
        json phones = json::array();
        for (std::size_t k = 0; k < p.phones.size(); ++k)
            phones.push_back({{"phone", format_phone(t.phones[k])},
                              {"volume", p.phones[k].volume},
                              {"pitch", p.phones[k].pitch},
                              {"duration", p.phones[k].duration}});
        tokens.push_back({{"token", t.text},
                          {"tag", t.kind == TokenKind::Punct ? std::string() : std::string(1, tag_code(t.tag))},
                          {"pause", p.pause},
                          {"word", {{"volume", p.word.volume}, {"pitch", p.word.pitch}, {"duration", p.word.duration}}},
                          {"phones", phones}});
    }
    json units = json::array();
    for (const auto& u : r.units.units) {
        units.push_back({{"kind", std::string(unit_kind_name(u.kind))},
                         {"first", std::string(symbol(u.diphone.first))},
                         {"second", std::string(symbol(u.diphone.second))},
                         {"seconds", u.seconds},
                         {"bank", u.bank},
                         {"bridge", u.bridge}});
    }
    return {{"tokens", tokens}, {"units", units}, {"report", r.report.to_json()}};
}

HttpReply Service::synthesize_text(const std::string& body) const {
    json req = parse_body(body);
    std::string text = text_field(req);
    auto base = settings(req.value("settings_name", std::string("default")));
    if (!base) return error_reply(404, "no such settings document");
    ProsodySettings s = req.contains("settings") ? base->merged(req.at("settings")) : *base;
    if (req.contains("seed")) s.seed = req.at("seed").get<std::uint64_t>();

    std::string bank_name = req.value("bank", default_bank_);
    Voice voice;
    if (!banks_.empty()) {
        auto it = banks_.find(bank_name);
        if (it == banks_.end()) return error_reply(404, "no bank named '" + bank_name + "'");
        voice.main = &it->second;
        for (const auto& [n, b] : banks_) voice.alternates[n] = &b;
    }
    bool plan_only = req.value("plan_only", false);
    if (!voice.main && !plan_only) return error_reply(503, "no diphone bank loaded");
    auto r = synthesize(text, voice, s, res_, {.plan_only = plan_only});
    if (plan_only) return json_reply(plan_json(r));
    HttpReply reply{200, "audio/wav", encode_wav(r.audio), {}};
    reply.headers["X-Clips"] = std::to_string(r.report.clips);
    reply.headers["X-Substitutions"] = std::to_string(r.report.substitutions.size());
    reply.headers["X-Real-Time-Factor"] = std::to_string(r.report.real_time_factor());
    return reply;
}

HttpReply Service::curve_preview(const std::string& body) const {
    json req = parse_body(body);
    if (!req.contains("curve")) throw DataError("request needs a \"curve\" object");
    // Reuse the settings parser so previews validate exactly like stored curves.
    auto doc = ProsodySettings::from_json({{"frequency", {{"volume", req.at("curve")}}}});
    const Curve& c = doc.frequency_curves.volume;
    double lo = req.value("lo", 0.0), hi = req.value("hi", 1.0);
    int n = req.value("n", 100);
    if (n < 1 || n > 10000) throw DataError("n must be in [1, 10000]");
    json pts = json::array();
    for (auto [x, y] : sample_curve(c, lo, hi, static_cast<std::size_t>(n))) pts.push_back({x, y});
    return json_reply({{"kind", std::string(curve_kind_name(c.kind))}, {"points", pts}});
}

void Service::serve(const std::string& host, int port) {
    auto server = std::make_shared<httplib::Server>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        std::map<std::string, std::string> query;
        for (const auto& [k, v] : req.params) query[k] = v;
        auto reply = handle(req.method, req.path, req.body, query);
        res.status = reply.status;
        for (const auto& [k, v] : reply.headers) res.set_header(k, v);
        res.set_content(reply.body, reply.content_type);
    };
    server->Get(".*", route);
    server->Put(".*", route);
    server->Post(".*", route);
    server->Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                 {"Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS"},
                                 {"Access-Control-Allow-Headers", "Content-Type"}});
    {
        std::lock_guard lock(mu_);
        server_ = server;
    }
    bool ok = server->listen(host, port);
    {
        std::lock_guard lock(mu_);
        server_.reset();
    }
    if (!ok) throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

void Service::stop() {
    std::lock_guard lock(mu_);
    if (server_) static_cast<httplib::Server*>(server_.get())->stop();
}

}  // namespace tts

namespace tts {

bool Service::running() const {
    std::lock_guard lock(mu_);
    return server_ && static_cast<httplib::Server*>(server_.get())->is_running();
}

}  // namespace tts
