#include <doctest.h>

#include <httplib.h>

#include <chrono>
#include <thread>

#include "tts/common.hpp"
#include "tts/fixture.hpp"
#include "tts/service.hpp"

using namespace tts;
using nlohmann::json;

namespace {

const Resources& resources() {
    static const Resources r = Resources::load(ResourcePaths::defaults(default_data_dir()));
    return r;
}

Service& service() {
    static Service s(resources(), {{"fixture", make_fixture_bank(1)}}, "fixture", ProsodySettings::neutral());
    return s;
}

}  // namespace

TEST_CASE("service routes") {
    auto& svc = service();
    auto h = svc.handle("GET", "/health", "");
    CHECK(h.status == 200);
    CHECK(json::parse(h.body)["banks"][0] == "fixture");

    auto b = json::parse(svc.handle("GET", "/banks", "").body);
    CHECK(b[0]["complete"] == true);
    CHECK(b[0]["diphones"] == 1013);

    CHECK(svc.handle("GET", "/nowhere", "").status == 404);
    CHECK(svc.handle("POST", "/synthesize", "{not json").status == 400);
    CHECK(svc.handle("POST", "/synthesize", "{\"txt\": 1}").status == 400);
}

TEST_CASE("service preprocess and synthesize") {
    auto& svc = service();
    auto p = svc.handle("POST", "/preprocess", R"({"text":"Yes, I'm going to buy 10 apples."})");
    REQUIRE(p.status == 200);
    auto rows = json::parse(p.body)["tokens"];
    CHECK(rows.size() == 9);
    CHECK(rows[6]["pronunciation"] == "T EH1 N");

    auto w = svc.handle("POST", "/synthesize", R"({"text":"hello"})");
    REQUIRE(w.status == 200);
    CHECK(w.content_type == "audio/wav");
    CHECK(parse_wav(w.body).samples.size() > 0);
    CHECK(svc.handle("POST", "/synthesize", R"({"text":"hello"})").body == w.body);

    auto louder = svc.handle("POST", "/synthesize", R"({"text":"hello","settings":{"stress":{"1":{"volume":1.5}}}})");
    CHECK(louder.status == 200);
    CHECK(louder.body != w.body);
    CHECK(svc.settings()->stress[1].volume == 1.0);

    auto plan = svc.handle("POST", "/synthesize", R"({"text":"Why? No.","plan_only":true})");
    REQUIRE(plan.status == 200);
    auto j = json::parse(plan.body);
    CHECK(j["tokens"].size() == 4);
    CHECK(j["tokens"][1]["pause"] == 0.6);
    CHECK_FALSE(j["units"].empty());

    CHECK(svc.handle("POST", "/synthesize", R"({"text":"hi","bank":"nope"})").status == 404);
}

TEST_CASE("service settings store") {
    Service svc(resources(), {}, "", ProsodySettings::neutral());
    auto doc = json::parse(svc.handle("GET", "/settings", "").body);
    CHECK(ProsodySettings::from_json(doc) == ProsodySettings::neutral());
    doc["seed"] = 99;
    auto put = svc.handle("PUT", "/settings", doc.dump(), {{"name", "mine"}});
    CHECK(put.status == 200);
    CHECK(svc.settings("mine")->seed == 99);
    CHECK(svc.settings()->seed == 1);
    CHECK(json::parse(svc.handle("GET", "/settings", "", {{"name", "mine"}}).body) == doc);
    CHECK(svc.handle("GET", "/settings", "", {{"name", "other"}}).status == 404);
    CHECK(svc.handle("PUT", "/settings", R"({"pauses":{",":-1}})").status == 400);
    CHECK(svc.handle("POST", "/synthesize", R"({"text":"hi"})").status == 503);
}

TEST_CASE("curve preview matches eval_curve") {
    auto& svc = service();
    Curve c{CurveKind::Quintic, {{0, 0.5}, {0.3, 1.0}, {0.6, -0.2}, {1, -2.0}}};
    json req = {{"curve", {{"kind", "quintic"}, {"points", {{0, 0.5}, {0.3, 1.0}, {0.6, -0.2}, {1, -2.0}}}}}};
    auto r = svc.handle("POST", "/curve/preview", req.dump());
    REQUIRE(r.status == 200);
    auto pts = json::parse(r.body)["points"];
    REQUIRE(pts.size() == 100);
    for (const auto& p : pts) CHECK(p[1].get<double>() == eval_curve(c, p[0].get<double>()));
    CHECK(svc.handle("POST", "/curve/preview", R"({"curve":{"kind":"cubic","points":[[0,1]]}})").status == 400);
    CHECK(svc.handle("POST", "/curve/preview", R"({"curve":{"points":[[0,1]]},"n":0})").status == 400);
}

TEST_CASE("service over a socket") {
    auto& svc = service();
    std::thread t([&] { svc.serve("127.0.0.1", 18734); });
    for (int i = 0; i < 200 && !svc.running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
    REQUIRE(svc.running());
    httplib::Client cli("127.0.0.1", 18734);
    auto res = cli.Get("/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Access-Control-Allow-Origin") == "*");
    auto syn = cli.Post("/synthesize", R"({"text":"hello"})", "application/json");
    REQUIRE(syn);
    CHECK(syn->status == 200);
    CHECK(syn->body.substr(0, 4) == "RIFF");
    svc.stop();
    t.join();
}
