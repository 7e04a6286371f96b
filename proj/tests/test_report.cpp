#include <doctest.h>

#include "alignv/report.hpp"

using namespace alignv;

TEST_CASE("exit codes") {
  for (const char* v : {"holds", "accepted", "ok"}) CHECK(exitCodeFor(v) == 0);
  for (const char* v : {"fails", "rejected", "refused"}) CHECK(exitCodeFor(v) == 1);
  CHECK(exitCodeFor("error") == 2);
  CHECK(exitCodeFor("inconclusive") == 3);
  CHECK(exitCodeFor("bogus") == 2);
}

TEST_CASE("text report ends with the RESULT line") {
  Report r;
  r.command = "check";
  r.domain = Domain{-8, 8};
  r.maxSteps = 100;
  r.verdict = "holds";
  r.lines = {"VC 1 -> 2: holds"};
  auto text = emitReport(r, ReportFormat::Text);
  CHECK(text == "VC 1 -> 2: holds\nmax-steps: 100\nRESULT: holds (domain -8..8)\n");
  r.domain.reset();
  r.maxSteps.reset();
  r.lines.clear();
  CHECK(emitReport(r, ReportFormat::Text) == "RESULT: holds\n");
}

TEST_CASE("JSON report") {
  Report r;
  r.command = "verify";
  r.config = {{"program", "c0.imp"}};
  r.domain = Domain{0, 5};
  r.verdict = "fails";
  r.data["witness"] = toJson(Witness{Store{{"x", 3}}, Store{}});
  auto j = nlohmann::json::parse(emitReport(r, ReportFormat::Json));
  CHECK(j["command"] == "verify");
  CHECK(j["config"]["program"] == "c0.imp");
  CHECK(j["domain"]["lo"] == 0);
  CHECK(j["domain"]["hi"] == 5);
  CHECK(j["verdict"] == "fails");
  CHECK(j["exit_code"] == 1);
  CHECK(j["data"]["witness"]["left"]["x"] == 3);
  CHECK_FALSE(j.contains("max_steps"));
  CHECK(j.contains("seconds"));
  CHECK(j.contains("threads"));
}

TEST_CASE("trace rendering") {
  AutTrace t = {AutState{Point::unary(1), Store{{"x", 1}}, {}}, AutState{Point::unary(0), Store{{"x", 2}}, {}}};
  auto j = toJson(t, false);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["ctrl"] == "1");
  CHECK(j[1]["store"]["x"] == 2);
  CHECK(traceLines(t, false).size() == 2);
  auto p = toJson(AutState{Point::pair(1, 2, Tag::Lck), Store{{"x", 1}}, Store{{"x", 5}}}, true);
  CHECK(p["right"]["x"] == 5);
}
