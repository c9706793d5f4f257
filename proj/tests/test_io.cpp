#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ccmm/io.hpp"
#include "ccmm/verify.hpp"
#include "test_support.hpp"

using namespace ccmm;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ccmm_test_" + name)).string();
}

}  // namespace

TEST(SpaceJson, RoundTrip) {
  const auto mm = ccmm::testing::suite_space(12);
  const Json j = space_to_json(mm);
  const auto back = parse_space(Json::parse(j.dump()));
  EXPECT_EQ(back.mm.space.matrix(), mm.space.matrix());
  EXPECT_EQ(back.mm.measure.weights(), mm.measure.weights());
  EXPECT_EQ(space_hash(back.mm), space_hash(mm));
  EXPECT_FALSE(back.certified.has_value());
}

TEST(SpaceJson, EdgesFormAndUniformDefault) {
  const auto j = Json::parse(R"({"n": 3, "dist": null, "edges": [[0,1,1],[1,2,1],[2,0,1]]})");
  const auto s = parse_space(j);
  EXPECT_DOUBLE_EQ(s.mm.space(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(s.mm.measure[2], 1.0 / 3);
}

TEST(SpaceJson, Errors) {
  EXPECT_THROW(parse_space(Json::parse(R"({"n": 2})")), IoError);
  EXPECT_THROW(parse_space(Json::parse(R"({"n": 2, "dist": [[0,1],[1,0]], "edges": [[0,1,1]]})")), IoError);
  EXPECT_THROW(parse_space(Json::parse(R"({"dist": [[0,1,5],[1,0,1],[5,1,0]]})")), Error);
  EXPECT_THROW(parse_space(Json::parse(R"({"dist": [[0,1],[1,0]], "measure": [0.2, 0.2]})")), Error);
  EXPECT_THROW(load_space(temp_path("does_not_exist.json")), IoError);
}

TEST(SpaceJson, CertificateSurvives) {
  const Certificate c{1.0, 0.0, 10.0, 1, "note"};
  const auto mm = ccmm::testing::two_point();
  const auto back = parse_space(space_to_json(mm, c));
  ASSERT_TRUE(back.certified.has_value());
  EXPECT_DOUBLE_EQ(back.certified->K, 1.0);
  EXPECT_EQ(back.certified->provenance, "note");
}

TEST(SpaceHash, SensitiveToWeights) {
  EXPECT_NE(space_hash(ccmm::testing::two_point(1, 1, 0.5)), space_hash(ccmm::testing::two_point(1, 1, 0.4)));
  EXPECT_EQ(space_hash(ccmm::testing::two_point()).size(), 16u);
}

TEST(FamilyJson, RoundTrip) {
  const auto mm = ccmm::testing::suite_space(3);
  const auto fam = generate_family(mm, 2 * mm.size() + 4, 8);
  const auto back = family_from_json(Json::parse(family_to_json(fam).dump()), mm.space);
  ASSERT_EQ(back.size(), fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    EXPECT_EQ(back[i].values, fam[i].values);
    EXPECT_EQ(back[i].origin, fam[i].origin);
  }
}

TEST(ProfileCsv, HeaderAndBitExactRoundTrip) {
  const auto prof = alpha_profile(ccmm::testing::suite_space(9), Strategy::Exact);
  const std::string csv = profile_to_csv(prof);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,alpha,strategy");
  std::istringstream in(csv);
  const auto back = profile_from_csv(in);
  ASSERT_EQ(back.points.size(), prof.points.size());
  for (std::size_t i = 0; i < prof.points.size(); ++i) {
    EXPECT_EQ(back.points[i].r, prof.points[i].r);
    EXPECT_EQ(back.points[i].alpha, prof.points[i].alpha);
  }
  EXPECT_EQ(back.strategy, Strategy::Exact);
}

TEST(FormatDouble, RoundTrips) {
  for (double v : {0.1, 1.0 / 3, 6.02214076e23, 5e-324, -2.5}) EXPECT_EQ(std::strtod(format_double(v).c_str(), nullptr), v);
}

TEST(WriteText, UnwritablePath) {
  EXPECT_THROW(write_text_file("/nonexistent_dir/x/y.csv", "a"), IoError);
}

TEST(CatalogSpec, ParsesConstantRanders) {
  const auto j = Json::parse(R"({"id": "seg", "domain": "interval", "x0": 0, "x1": 1, "resolution": 8,
                                 "one_form": [0.25], "certified": {"K": 0, "D": 1, "dim": 1}})");
  const auto e = parse_catalog_spec(j);
  EXPECT_EQ(e.id, "seg");
  EXPECT_EQ(e.spec.resolution, 8u);
  const auto b = build_space(e);
  EXPECT_NEAR(b.mm.space(0, 7) - b.mm.space(7, 0), 2 * 0.25 * (b.points[7][0] - b.points[0][0]), 1e-12);
  EXPECT_TRUE(e.certified.has_value());
}

TEST(VerifyReport, TwoPointSections3And4AllPass) {
  VerifyOptions opt;
  opt.sections = {"sec3", "sec4"};
  const auto r = run_verify(ccmm::testing::two_point(), opt);
  ASSERT_EQ(r.results.size(), verify_ids().size());
  for (const auto& [id, c] : r.results) {
    const auto sec = section_of(id);
    if (sec == "sec3" || sec == "sec4") EXPECT_EQ(c.status, Status::Pass) << id << ": " << c.notes;
    else EXPECT_EQ(c.status, Status::Skipped);
  }
  EXPECT_FALSE(r.any_fail());
}

TEST(VerifyReport, LargeSpacesSkipExactChecks) {
  VerifyOptions opt;
  opt.sections = {"sec3", "sec4"};
  const auto r = run_verify(random_space(18, 2), opt);
  for (const char* id : {"mf3", "prop32.1", "prop32.2", "thm33", "thm37", "thm41", "obnor", "obex"}) {
    EXPECT_EQ(r.at(id).status, Status::Skipped) << id;
    EXPECT_NE(r.at(id).notes.find("n = 18"), std::string::npos);
  }
  EXPECT_NE(r.at("thm38").status, Status::Skipped);
}

TEST(VerifyReport, CsvHasOneRowPerId) {
  VerifyOptions opt;
  opt.sections = {"sec4"};
  const auto r = run_verify(ccmm::testing::suite_space(4), opt);
  const std::string csv = r.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "id,status,margin,notes");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), verify_ids().size() + 1);
  const Json j = r.to_json();
  EXPECT_EQ(j["metadata"]["version"], kVersion);
  EXPECT_FALSE(j["metadata"].contains("timestamp"));
  EXPECT_THROW(run_verify(ccmm::testing::two_point(), VerifyOptions{{"sec9"}}), Error);
}
