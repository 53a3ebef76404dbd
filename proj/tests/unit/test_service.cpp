// Copyright 2026 The dockscope Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <thread>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dockscope/error.hpp"
#include "dockscope/service/payloads.hpp"
#include "dockscope/service/service.hpp"
#include "dockscope/synthetic.hpp"

namespace fs = std::filesystem;
using namespace dockscope;
using namespace dockscope::service;
using nlohmann::json;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "dockscope_service_case";
    fs::remove_all(dir_);
    scenario_ = new CaseScenario(case_scenario(80, 15, 5));
    write_ensemble_files(scenario_->ensemble, dir_);
  }
  static void TearDownTestSuite() { delete scenario_; }

  void SetUp() override {
    auto r = call("POST", "/sessions");
    ASSERT_EQ(r.status, 201);
    sid_ = json::parse(r.body)["session"];
    r = call("POST", path("ensemble"),
             json{{"input", dir_.string()},
                  {"mapping_path", (dir_ / "mapping.csv").string()},
                  {"properties_path", (dir_ / "properties.csv").string()}}
                 .dump());
    ASSERT_EQ(r.status, 201) << r.body;
  }

  Response call(std::string method, std::string p, std::string body = {},
                std::map<std::string, std::string> query = {}) {
    return service_.handle(Request{std::move(method), std::move(p), std::move(query), std::move(body)});
  }
  json get(const std::string& what, std::map<std::string, std::string> query = {}) {
    auto r = call("GET", path(what), {}, std::move(query));
    EXPECT_EQ(r.status, 200) << what << ": " << r.body;
    return json::parse(r.body);
  }
  std::string path(const std::string& what) const { return "/sessions/" + sid_ + "/" + what; }

  static inline fs::path dir_;
  static inline CaseScenario* scenario_ = nullptr;
  Service service_;
  std::string sid_;
};

}  // namespace

TEST_F(ServiceTest, Health) {
  auto r = call("GET", "/health");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(json::parse(r.body)["status"], "ok");
}

TEST_F(ServiceTest, DrillDownThroughScript) {
  auto status = get("status");
  EXPECT_EQ(status["status"]["ccs_visible"], 80);
  const std::string script = "remove_complement aap " + scenario_->aap_first + " " + scenario_->aap_second + "\n" +
                             "remove_complement aa " + scenario_->residue + "\n";
  auto r = call("POST", path("filters"), json{{"script", script}}.dump());
  ASSERT_EQ(r.status, 201) << r.body;
  auto j = json::parse(r.body);
  EXPECT_EQ(j["added"].size(), 2u);
  EXPECT_EQ(j["status"]["ccs_visible"], 1);
  auto visible = get("visible");
  EXPECT_EQ(visible["visible"], json::array({scenario_->planted_cc}));

  // Disabling the AA filter brings back the AAP subset, marked as affected.
  const int aa_filter = j["added"][1];
  r = call("PATCH", path("filters/" + std::to_string(aa_filter)), json{{"enabled", false}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  status = get("status");
  EXPECT_EQ(status["status"]["ccs_visible"], 15);
  EXPECT_EQ(status["status"]["ccs_affected"], 14);

  auto text = call("GET", path("filters/script"));
  EXPECT_NE(text.body.find("disabled remove_complement aa"), std::string::npos) << text.body;
}

TEST_F(ServiceTest, StructuredFilterMatchesStatement) {
  auto r1 = call("POST", path("filters"),
                 json{{"kind", "remove"}, {"aaps", json::array({json::array({scenario_->aap_first, scenario_->aap_second})})}}.dump());
  ASSERT_EQ(r1.status, 201) << r1.body;
  auto a = get("visible");
  call("DELETE", path("filters"));
  auto r2 = call("POST", path("filters"),
                 json{{"statement", "remove aap " + scenario_->aap_first + " " + scenario_->aap_second}}.dump());
  ASSERT_EQ(r2.status, 201) << r2.body;
  EXPECT_EQ(get("visible")["visible"], a["visible"]);
  EXPECT_EQ(a["visible"].size(), 65u);
}

TEST_F(ServiceTest, RangeFilterPatchMovesToEnd) {
  auto r = call("POST", path("filters"),
                json{{"filters", {{{"kind", "range"}, {"where", {{"property", "score"}, {"min", nullptr}, {"max", nullptr}}}},
                                  {{"kind", "remove"}, {"ccs", {"cc01"}}}}}}
                    .dump());
  ASSERT_EQ(r.status, 201) << r.body;
  auto j = json::parse(r.body);
  const int range_id = j["added"][0];
  EXPECT_EQ(j["filters"][0]["id"], range_id);
  r = call("PATCH", path("filters/" + std::to_string(range_id)), json{{"min", -1e9}, {"max", 1e9}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  j = json::parse(r.body);
  EXPECT_EQ(j["filters"][1]["id"], range_id);
}

TEST_F(ServiceTest, GenerationAndStaleFlag) {
  auto a = get("status");
  const auto g = a["generation"].get<std::uint64_t>();
  call("POST", path("filters"), json{{"statement", "remove cc cc02"}}.dump());
  auto b = get("status", {{"generation", std::to_string(g)}});
  EXPECT_GT(b["generation"].get<std::uint64_t>(), g);
  EXPECT_TRUE(b.value("stale", false));
  auto c = get("status", {{"generation", std::to_string(b["generation"].get<std::uint64_t>())}});
  EXPECT_FALSE(c.contains("stale"));
}

TEST_F(ServiceTest, ErrorMapping) {
  EXPECT_EQ(call("GET", "/sessions/nope/status").status, 404);
  EXPECT_EQ(call("GET", path("nothing")).status, 404);
  EXPECT_EQ(call("PUT", path("status")).status, 405);
  auto bad = call("POST", path("filters"), json{{"script", "remove cc ghost"}}.dump());
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(json::parse(bad.body)["code"], "script_error");
  EXPECT_EQ(call("POST", path("filters"), "{not json").status, 400);
  auto status = get("status");
  EXPECT_EQ(status["status"]["filters"], 0);
}

TEST_F(ServiceTest, ViewsRespond) {
  auto ov = get("overview", {{"scaling", "absolute"}});
  EXPECT_EQ(ov["edges"].size(), 2u);
  auto pv = get("protein-view", {{"protein", "A"}, {"condensed", "true"}});
  EXPECT_TRUE(pv.contains("columns"));
  auto rm = get("residue-matrix", {{"pair", "A,B"}, {"sort", "frequency"}});
  EXPECT_FALSE(rm["cells"].empty());
  auto props = get("properties");
  EXPECT_EQ(props["ccs"].size(), 80u);
  auto cl = get("contact-lists", {{"pair", "A,B"}});
  EXPECT_FALSE(cl["entries"].empty());
}

TEST_F(ServiceTest, PrimaryCcAddsSimilarityColumn) {
  auto r = call("POST", path("primary"), json{{"protein", "A"}, {"cc", "cc03"}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  auto sim = get("similarity");
  ASSERT_FALSE(sim["ranking"].empty());
  EXPECT_EQ(sim["ranking"][0]["cc"], "cc03");
  auto f = call("POST", path("filters"), json{{"statement", "range cc similarity_to_primary 0.999 1"}}.dump());
  ASSERT_EQ(f.status, 201) << f.body;
  EXPECT_GE(json::parse(f.body)["status"]["ccs_visible"].get<int>(), 1);
}

TEST_F(ServiceTest, SelectionPropagation) {
  auto r = call("POST", path("selection"),
                json{{"level", "aap"}, {"items", json::array({json::array({scenario_->aap_first, scenario_->aap_second})})}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  r = call("POST", path("selection/propagate"), json{{"direction", "up"}}.dump());
  ASSERT_EQ(r.status, 200) << r.body;
  auto sel = get("selection");
  EXPECT_EQ(sel["items"]["ccs"].size(), 15u);
}

TEST_F(ServiceTest, SpatialEndpoints) {
  auto mesh = get("density-mesh", {{"protein", "A"}, {"spacing", "2"}});
  EXPECT_EQ(mesh["meshes"].size(), 2u);
  EXPECT_FALSE(mesh["meshes"][0]["triangles"].empty());
  auto stl = call("GET", path("density-mesh/stl"), {}, {{"protein", "A"}, {"channel", "B"}, {"spacing", "2"}});
  EXPECT_EQ(stl.status, 200) << stl.body;
  EXPECT_EQ(stl.content_type, "model/stl");
  EXPECT_TRUE(stl.headers.count("X-Dockscope-Generation"));
  auto dx = call("GET", path("density-grid"), {}, {{"protein", "A"}, {"channel", "B"}, {"spacing", "2"}});
  EXPECT_EQ(dx.status, 200) << dx.body;
  auto ex = get("exploded-cc", {{"cc", "cc01"}, {"gap", "6"}});
  EXPECT_TRUE(ex["converged"].get<bool>());
  auto pdb = call("GET", path("structure"), {}, {{"cc", "cc01"}});
  EXPECT_NE(pdb.body.find("ATOM"), std::string::npos);
}

TEST_F(ServiceTest, ConcurrentReadsDuringWrites) {
  std::atomic<bool> stop{false};
  std::atomic<int> failures{0};
  std::thread reader([&] {
    while (!stop) {
      auto r = call("GET", path("aggregates"));
      if (r.status != 200) ++failures;
    }
  });
  for (int i = 0; i < 30; ++i) {
    call("POST", path("filters"), json{{"statement", "remove cc cc0" + std::to_string(1 + i % 9)}}.dump());
    if (i % 5 == 4) call("DELETE", path("filters"));
  }
  stop = true;
  reader.join();
  EXPECT_EQ(failures.load(), 0);
}

TEST(Payloads, FilterRequestRoundTrip) {
  auto cs = case_scenario(40, 8, 2);
  auto ens = build_hierarchy(cs.ensemble);
  const std::string script = "remove cc cc01 cc02\n"
                             "disabled fix ppe A B\n"
                             "add ppc cc03 A B\n"
                             "remove_complement aap " + cs.aap_first + " " + cs.aap_second + "\n"
                             "remove aa " + cs.residue + "\n"
                             "range cc score -5 inf\n"
                             "remove ppc where n_aap 3 inf of A B\n";
  for (const auto& st : parse_filter_script(script, ens)) {
    json req = payload::filter_request(st.kind, st.subject, st.enabled, ens);
    auto back = payload::parse_filter_request(req, ens);
    EXPECT_EQ(format_statement(back.kind, back.subject, back.enabled, ens),
              format_statement(st.kind, st.subject, st.enabled, ens))
        << req.dump();
  }
}
