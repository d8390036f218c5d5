#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "htloc/report.hpp"
#include "json.hpp"
#include "support/fixtures.hpp"

using namespace htloc;
using nlohmann::json;

TEST_SUITE("report") {
  TEST_CASE("format_number round-trips") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(0.0) == "0");
    CHECK(format_number(100.0) == "100");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  }

  TEST_CASE("report json for c17") {
    LocatorConfig cfg;
    cfg.k_triggers = 2;
    const auto j = json::parse(report_json(localize(testing::c17_renumbered(), cfg)));
    CHECK(j["design"] == "c17_renumbered");
    CHECK(j["config"]["k_triggers"] == 2);
    CHECK(j["config"]["influential_filter"] == "max-C");
    CHECK(j["metrics"].size() == 6);
    REQUIRE(j["triggers"].size() == 2);
    CHECK(j["triggers"][0]["net"].get<std::string>().rfind("N8->N11#", 0) == 0);
    CHECK(j["triggers"][1]["net"].get<std::string>().rfind("N9->N12#", 0) == 0);
    CHECK(j["triggers"][0]["F"] == 0.0);
    CHECK(j["payload"]["net"].get<std::string>().rfind("N12->N13#", 0) == 0);
    REQUIRE(j["filtered"].size() == 1);
    CHECK(j["filtered"][0].get<std::string>().rfind("N9->N10#", 0) == 0);
    CHECK(j["eigenvector"]["degenerate"] == true);
    CHECK(j["metric_roles"].size() == 7);
    CHECK(j["warnings"].empty());
    for (const auto& m : j["metrics"]) {
      for (const auto* key : {"net", "src", "dst", "label", "C", "CC", "BC", "EVC", "PR"}) CHECK(m.contains(key));
    }
  }

  TEST_CASE("metrics csv") {
    const auto r = localize(testing::c17_renumbered());
    const auto csv = metrics_csv(r.graph, r.metrics);
    CHECK(csv.rfind("net,src,dst,C,CC,BC,EVC,PR\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find(",N9,N10,0.4,0,0,") != std::string::npos);
  }

  TEST_CASE("config json") {
    const auto j = json::parse(config_json({}));
    CHECK(j["W_C"] == 0.5);
    CHECK(j["W_CC"] == 0.5);
    CHECK(j["k_triggers"] == 4);
    CHECK(j["damping"] == 0.85);
    CHECK(j["include_evc_when_degenerate"] == false);
  }

  TEST_CASE("manifest round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "htloc_report_test";
    std::filesystem::create_directories(dir);
    const auto corpus = generate_corpus(testing::c17_renumbered(), 3, 9);
    std::vector<ManifestEntry> entries;
    for (const auto& inst : corpus) {
      const auto file = inst.infected.name() + ".bench";
      std::ofstream(dir / file) << write_bench(inst.infected);
      entries.push_back({file, inst});
    }
    const auto text = manifest_json(entries);
    const auto j = json::parse(text);
    REQUIRE(j.size() == 3);
    for (const auto* key : {"bench_file", "kind", "triggers", "payload", "seed"}) CHECK(j[0].contains(key));
    CHECK(j[0]["kind"] == "explicit");

    const auto back = read_manifest(text, dir.string());
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(back[i].bench_file == entries[i].bench_file);
      CHECK(back[i].instance.infected == corpus[i].infected);
      CHECK(back[i].instance.truth_triggers == corpus[i].truth_triggers);
      CHECK(back[i].instance.truth_payload == corpus[i].truth_payload);
      CHECK(back[i].instance.payload_aliases == corpus[i].payload_aliases);
      CHECK(back[i].instance.seed == corpus[i].seed);
      CHECK(back[i].instance.design == "c17_renumbered");
    }
    CHECK(manifest_json(back) == text);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("malformed manifests") {
    CHECK_THROWS_AS((void)read_manifest("{", "."), Error);
    CHECK_THROWS_AS((void)read_manifest("{}", "."), Error);
    CHECK_THROWS_AS((void)read_manifest(R"([{"kind": "explicit"}])", "."), Error);
    CHECK_THROWS_AS((void)read_manifest(R"([{"bench_file": "missing.bench", "kind": "explicit"}])", "."), Error);
  }
}
