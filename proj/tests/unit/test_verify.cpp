#include <string>

#include "doctest.h"
#include "fraclap/errors.hpp"
#include "fraclap/rates.hpp"
#include "fraclap/verify.hpp"
#include "json.hpp"

using namespace fraclap;

TEST_CASE("verification suite passes on every preset") {
  for (const auto& name : preset_names()) {
    for (const double theta : {0.0, 0.5, 1.0}) {
      CAPTURE(name);
      CAPTURE(theta);
      const VerifyConfig cfg{preset_symbols(name, theta), 2, name, 1500, 3, 1};
      const auto recs = run_verification(cfg);
      for (const auto& r : recs) {
        CAPTURE(r.check);
        CHECK(r.pass);
      }
    }
  }
}

TEST_CASE("verification report: keys, order and determinism") {
  const VerifyConfig cfg{preset_symbols("plate", 0.5), 2, "plate", 300, 7, 2};
  const auto a = verification_json("plate", run_verification(cfg));
  const VerifyConfig serial{preset_symbols("plate", 0.5), 2, "plate", 300, 7, 1};
  CHECK(a == verification_json("plate", run_verification(serial)));
  const auto j = nlohmann::ordered_json::parse(a);
  CHECK(j["pass"] == true);
  for (const auto& rec : j["records"]) {
    std::vector<std::string> keys;
    for (const auto& [k, v] : rec.items()) keys.push_back(k);
    REQUIRE(keys.size() >= 5);
    CHECK(keys[0] == "check");
    CHECK(keys[1] == "params");
    CHECK(keys[2] == "worst_point");
    CHECK(keys[3] == "violation");
    CHECK(keys[4] == "pass");
  }
}

TEST_CASE("skipped checks say why") {
  const auto complex_low = verify_root_brackets({1, 2, 1.5, 2}, 100);
  CHECK(complex_low.pass);
  CHECK(complex_low.note.find("skipped") == 0);
  const VerifyConfig loss{preset_symbols("plate", 0.0), 2, "plate", 100, 1, 1};
  CHECK(verify_e1f(loss).note.find("regularity loss") != std::string::npos);
}

TEST_CASE("a violated bound is reported as a failure") {
  VerifyRecord r = verify_q_ratio_bound(5, 10);
  CHECK(r.pass);
  CHECK(r.violation <= 10.0);
  std::vector<VerifyRecord> recs{r};
  recs.push_back({"synthetic", {}, {}, 2.0, 1.0, 1, false, ""});
  CHECK_FALSE(all_pass(recs));
  CHECK_THROWS_AS(run_verification({preset_symbols("wave", 0.0), 2, "w", 0, 1, 1}),
                  InvalidParameters);
}
