#include <doctest.h>

#include <random>
#include <sstream>

#include "octmc/perception.hpp"
#include "oracles.hpp"

using namespace octmc;

namespace {

LabeledVolume flat_volume(std::size_t ilm_d, std::size_t rpe_d, ScanGeometry g = {}) {
  LabeledVolume v(g);
  for (std::size_t b = 0; b < g.n_bscans; ++b) {
    for (std::size_t a = 0; a < g.n_ascans; ++a) {
      v.set(b, a, ilm_d, Label::ilm);
      v.set(b, a, rpe_d, Label::rpe);
    }
  }
  return v;
}

}  // namespace

TEST_SUITE("perception") {
  TEST_CASE("zero error rates leave the volume untouched") {
    auto v = flat_volume(512, 563);
    RandomStream r(1);
    const auto out = corrupt(v, SegmentationErrorModel{}, r);
    CHECK(out == v);
  }

  TEST_CASE("a constant +50 um corruption moves every ILM pixel down 10 pixels") {
    auto v = flat_volume(512, 563);
    SegmentationErrorModel m;
    m.scan_corruption_rate = 1.0;
    m.corruption_offset = {OffsetKind::constant, 50.0, 0.0};
    RandomStream r(1);
    const auto out = corrupt(v, m, r);
    const auto hits = oracle::first_hits(out);
    for (const auto& h : hits) {
      REQUIRE(h.first[1] == std::optional<std::size_t>(522));
      REQUIRE(h.first[2] == std::optional<std::size_t>(563));
    }
  }

  TEST_CASE("shifts clamp at the window edge") {
    auto v = flat_volume(3, 60, ScanGeometry{.n_bscans = 1, .n_ascans = 4, .n_depth = 64});
    SegmentationErrorModel m;
    m.scan_corruption_rate = 1.0;
    m.corruption_offset = {OffsetKind::constant, -1000.0, 0.0};
    RandomStream r(1);
    const auto out = corrupt(v, m, r);
    for (const auto& h : oracle::first_hits(out)) CHECK(h.first[1] == std::optional<std::size_t>(0));
  }

  TEST_CASE("dropout removes about the configured fraction of ILM points") {
    auto v = flat_volume(512, 563);
    SegmentationErrorModel m;
    m.dropout_rate = 0.3;
    RandomStream r(11);
    const auto cloud = extract_surface_point_cloud(corrupt(v, m, r));
    CHECK(cloud.ilm.size() >= 3400);
    CHECK(cloud.ilm.size() <= 3600);
    CHECK(cloud.rpe.size() == 5000);
  }

  TEST_CASE("pixel flips change about the configured fraction of voxels") {
    ScanGeometry g{.n_bscans = 2, .n_ascans = 100, .n_depth = 500};
    LabeledVolume v(g);
    SegmentationErrorModel m;
    m.pixel_flip_rate = 0.01;
    RandomStream r(12);
    const auto out = corrupt(v, m, r);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < v.labels.size(); ++i) {
      changed += out.labels[i] != v.labels[i];
      REQUIRE(out.labels[i] < 4);
    }
    CHECK(changed >= 850);
    CHECK(changed <= 1150);
  }

  TEST_CASE("offset distributions") {
    RandomStream r(3);
    OffsetDistribution sym{OffsetKind::symmetric, 50.0, 0.0};
    int pos = 0;
    for (int i = 0; i < 2000; ++i) {
      const double x = sym.sample(r);
      REQUIRE((x == 50.0 || x == -50.0));
      pos += x > 0;
    }
    CHECK(pos > 900);
    CHECK(pos < 1100);
    OffsetDistribution uni{OffsetKind::uniform, -10.0, 30.0};
    for (int i = 0; i < 2000; ++i) {
      const double x = uni.sample(r);
      REQUIRE(x >= -10.0);
      REQUIRE(x < 30.0);
    }
    CHECK_FALSE(OffsetDistribution{OffsetKind::uniform, 5.0, 1.0}.validate().empty());
    CHECK_FALSE(OffsetDistribution{OffsetKind::normal, 5.0, -1.0}.validate().empty());
  }

  TEST_CASE("error model validation names the offending field") {
    SegmentationErrorModel m;
    m.dropout_rate = 1.5;
    m.corruption_offset = {OffsetKind::normal, 0.0, -2.0};
    const auto issues = m.validate();
    REQUIRE(issues.size() == 2);
    CHECK(issues[0].field == "dropout_rate");
    CHECK(issues[1].field == "corruption_offset.sd_um");
  }

  TEST_CASE("ILM at index 510 extracts at 2490.234375 um") {
    const auto cloud = extract_surface_point_cloud(flat_volume(510, 563));
    REQUIRE(cloud.ilm.size() == 5000);
    for (const auto& p : cloud.ilm) REQUIRE(p.z == 2490.234375);
    CHECK(median_layer_depth(cloud, Label::ilm) == std::optional<double>(2490.234375));
    CHECK(cloud.ilm.back().x == doctest::Approx(4000.0));
    CHECK(cloud.ilm.back().y == doctest::Approx(100.0));
  }

  TEST_CASE("needle and ILM in one column are both extracted") {
    ScanGeometry g{.n_bscans = 1, .n_ascans = 1, .n_depth = 100};
    LabeledVolume v(g);
    v.set(0, 0, 10, Label::needle);
    v.set(0, 0, 11, Label::needle);
    v.set(0, 0, 40, Label::ilm);
    v.set(0, 0, 50, Label::ilm);
    const auto cloud = extract_surface_point_cloud(v);
    REQUIRE(cloud.needle.size() == 1);
    REQUIRE(cloud.ilm.size() == 1);
    CHECK(cloud.needle[0].z == 10 * g.depth_pitch_um());
    CHECK(cloud.ilm[0].z == 40 * g.depth_pitch_um());
    CHECK(cloud.rpe.empty());
  }

  TEST_CASE("an all-background volume gives an empty cloud and no median") {
    LabeledVolume v(ScanGeometry{.n_ascans = 10});
    v.t_start_s = 1.0;
    v.t_end_s = 1.2;
    v.id = 42;
    const auto cloud = extract_surface_point_cloud(v);
    CHECK(cloud.empty());
    CHECK_FALSE(median_layer_depth(cloud, Label::ilm).has_value());
    CHECK(cloud.source_volume_id == 42);
    CHECK(cloud.t_effective_s == doctest::Approx(1.1));
  }

  TEST_CASE("extraction matches the brute-force oracle on random volumes") {
    std::mt19937_64 gen(21);
    for (int i = 0; i < 3000; ++i) {
      const auto v = oracle::random_volume(gen);
      const auto cloud = extract_surface_point_cloud(v);
      for (Label l : {Label::ilm, Label::rpe, Label::needle}) {
        const auto expected = oracle::brute_force_points(v, l);
        const auto& got = cloud.points(l);
        REQUIRE(got.size() == expected.size());
        REQUIRE(got.size() <= v.geometry.column_count());
        for (std::size_t k = 0; k < got.size(); ++k) {
          REQUIRE(got[k].x == doctest::Approx(expected[k].x).epsilon(1e-12));
          REQUIRE(got[k].y == doctest::Approx(expected[k].y).epsilon(1e-12));
          REQUIRE(got[k].z == doctest::Approx(expected[k].z).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("lower median examples") {
    CHECK_FALSE(lower_median({}).has_value());
    CHECK(lower_median({7.0}) == std::optional<double>(7.0));
    CHECK(lower_median({1.0, 2.0}) == std::optional<double>(1.0));
    CHECK(lower_median({3.0, 1.0, 2.0}) == std::optional<double>(2.0));
    CHECK(lower_median({4.0, 1.0, 3.0, 2.0}) == std::optional<double>(2.0));
  }

  TEST_CASE("median ignores a minority of outliers") {
    // 99 points at 2500 and 49 at 3000: the median stays on the majority.
    std::vector<double> z(99, 2500.0);
    z.insert(z.end(), 49, 3000.0);
    CHECK(lower_median(z) == std::optional<double>(2500.0));
  }

  TEST_CASE("median matches the sort oracle and resists a minority of outliers") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 5000.0);
    std::uniform_int_distribution<int> len(1, 400);
    for (int i = 0; i < 2000; ++i) {
      std::vector<double> z(static_cast<std::size_t>(len(gen)));
      for (auto& x : z) x = u(gen);
      REQUIRE(lower_median(z) == oracle::sorted_lower_median(z));

      // Corrupting fewer than half the values keeps the median within the
      // range of the clean majority.
      const std::size_t n = 2 * z.size() + 1;
      std::vector<double> clean(n);
      for (auto& x : clean) x = 2400.0 + 200.0 * u(gen) / 5000.0;
      auto dirty = clean;
      const std::size_t k = (n - 1) / 2;
      for (std::size_t j = 0; j < k; ++j) dirty[j] = j % 2 ? -1e6 : 1e6;
      const double m = *lower_median(dirty);
      REQUIRE(m >= 2400.0);
      REQUIRE(m <= 2600.0);
    }
  }

  TEST_CASE("point cloud CSV format") {
    ScanGeometry g{.n_bscans = 1, .n_ascans = 2, .n_depth = 4};
    LabeledVolume v(g);
    v.set(0, 1, 2, Label::ilm);
    v.t_start_s = 0.0;
    v.t_end_s = 0.1;
    std::ostringstream os;
    write_point_cloud_csv(os, extract_surface_point_cloud(v));
    CHECK(os.str() == "class,x,y,z,t\nILM,4000.0000,0.0000,2500.0000,0.050000000\n");
  }
}
