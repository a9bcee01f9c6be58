#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "fts/errors.hpp"
#include "fts/telemetry.hpp"
#include "support/tempdir.hpp"

using namespace fts;

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

TelemetryStream make_fts(SensorPosition pos, std::vector<double> ts) {
    TelemetryStream s;
    s.sensor = SensorId::fts(pos);
    s.frame = Frame::Raw;
    s.timestamps = std::move(ts);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(-20.0, 20.0);
    for (int c = 0; c < 6; ++c) {
        std::vector<double> series(s.timestamps.size());
        for (double& v : series) v = dist(rng);
        s.channels.push_back(std::move(series));
    }
    return s;
}

}  // namespace

TEST_CASE("ingest reads a constant 3-row FTS file intact") {
    testutil::TempDir dir("ingest");
    write_file(dir / "f.csv",
               "t,fx,fy,fz,tx,ty,tz\n"
               "0.0,1,2,3,4,5,6\n"
               "0.1,1,2,3,4,5,6\n"
               "0.2,1,2,3,4,5,6\n");
    const auto s = ingest_csv(dir / "f.csv", SensorId::fts(SensorPosition::FL));
    REQUIRE(s.size() == 3);
    CHECK(s.frame == Frame::Raw);
    CHECK(s.channel("fx")[0] == 1.0);
    CHECK(s.channel("tz")[2] == 6.0);
    CHECK(s.timestamps[1] == 0.1);
}

TEST_CASE("ingest rejects reversed timestamps") {
    testutil::TempDir dir("order");
    write_file(dir / "f.csv",
               "t,fx,fy,fz,tx,ty,tz\n"
               "2.0,0,0,0,0,0,0\n"
               "1.0,0,0,0,0,0,0\n");
    CHECK_THROWS_AS(ingest_csv(dir / "f.csv", SensorId::fts(SensorPosition::FL)),
                    OrderingError);
}

TEST_CASE("ingest rejects NaN in fz and cites row 7") {
    testutil::TempDir dir("nan");
    std::string text = "t,fx,fy,fz,tx,ty,tz\n";
    for (int row = 1; row <= 9; ++row) {
        text += std::to_string(row) + ",1,1," + (row == 7 ? "NaN" : "1") +
                ",1,1,1\n";
    }
    write_file(dir / "f.csv", text);
    CHECK_THROWS_WITH_AS(
        ingest_csv(dir / "f.csv", SensorId::fts(SensorPosition::FL)),
        doctest::Contains("row 7"), ParseError);
}

TEST_CASE("ingest rejects an unknown column") {
    testutil::TempDir dir("schema");
    write_file(dir / "f.csv", "t,fx,fy,fz,tx,ty,qz\n0,1,1,1,1,1,1\n");
    CHECK_THROWS_AS(ingest_csv(dir / "f.csv", SensorId::fts(SensorPosition::FL)),
                    SchemaError);
    write_file(dir / "i.csv", "t,ax,ay\n0,1,1\n");
    CHECK_THROWS_AS(ingest_csv(dir / "i.csv", SensorId::imu()), SchemaError);
}

TEST_CASE("normalize flips right-side force and in-plane torque signs") {
    auto s = make_fts(SensorPosition::FR, {0.0, 1.0});
    s.channel_mut("fx") = {1.0, 2.0};
    s.channel_mut("fz") = {5.0, 5.0};
    const auto r = normalize_frame(s);
    CHECK(r.frame == Frame::Rover);
    CHECK(r.channel("fx")[0] == -1.0);
    CHECK(r.channel("fx")[1] == -2.0);
    CHECK(r.channel("fy")[0] == -s.channel("fy")[0]);
    CHECK(r.channel("tx")[1] == -s.channel("tx")[1]);
    CHECK(r.channel("ty")[0] == -s.channel("ty")[0]);
    // z stays put under a rotation about z.
    CHECK(r.channel("fz")[0] == 5.0);
    CHECK(r.channel("tz")[1] == s.channel("tz")[1]);
}

TEST_CASE("normalize leaves left-side and IMU streams unchanged") {
    const auto s = make_fts(SensorPosition::FL, {0.0, 1.0, 2.0});
    const auto r = normalize_frame(s);
    CHECK(r.frame == Frame::Rover);
    for (std::size_t c = 0; c < s.channels.size(); ++c) {
        CHECK(r.channels[c] == s.channels[c]);
    }

    TelemetryStream imu;
    imu.sensor = SensorId::imu();
    imu.timestamps = {0.0};
    imu.channels = {{1.0}, {2.0}, {9.8}};
    const auto ri = normalize_frame(imu);
    CHECK(ri.channels == imu.channels);
    CHECK(ri.frame == Frame::Rover);
}

TEST_CASE("normalizing twice is a state error") {
    const auto s = make_fts(SensorPosition::CR, {0.0});
    const auto r = normalize_frame(s);
    CHECK_THROWS_AS(normalize_frame(r), StateError);
}

TEST_CASE("the underlying rotation is an involution") {
    const auto s = make_fts(SensorPosition::BR, {0.0, 0.5, 1.0, 1.5});
    auto once = normalize_frame(s);
    once.frame = Frame::Raw;  // re-arm the flip
    const auto twice = normalize_frame(once);
    for (std::size_t c = 0; c < s.channels.size(); ++c) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(std::abs(twice.channels[c][i] - s.channels[c][i]) < 1e-12);
        }
    }
}

TEST_CASE("write then ingest preserves every value bit-exactly") {
    testutil::TempDir dir("roundtrip");
    auto s = make_fts(SensorPosition::CL, {0.0, 0.337, 1.0000001, 2.5});
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dist(-1e3, 1e3);
    for (auto& channel : s.channels) {
        for (double& v : channel) v = dist(rng) / 3.0;
    }
    write_csv(s, dir / "s.csv");
    const auto back = ingest_csv(dir / "s.csv", s.sensor);
    CHECK(back.timestamps == s.timestamps);
    CHECK(back.channels == s.channels);

    TelemetryStream imu;
    imu.sensor = SensorId::imu();
    imu.timestamps = {0.0, 0.02};
    imu.channels = {{0.123456789012345, -1.0}, {2.0, 3.0}, {9.81, 9.81000000001}};
    write_csv(imu, dir / "i.csv");
    const auto back_imu = ingest_csv(dir / "i.csv", imu.sensor);
    CHECK(back_imu.channels == imu.channels);
}

TEST_CASE("label track answers point and window queries") {
    const LabelTrack track({{0.0, 10.0, Terrain::Rock},
                            {10.0, 20.0, Terrain::Loose}});
    CHECK(track.label_at(5.0) == Terrain::Rock);
    CHECK(track.label_at(12.0) == Terrain::Loose);
    CHECK(!track.label_at(25.0).has_value());

    CHECK(track.label_for_window(1.0, 2.0) == Terrain::Rock);
    // Straddles the 10 s boundary: stays unlabeled.
    CHECK(!track.label_for_window(9.5, 10.5).has_value());
    CHECK(!track.label_for_window(19.5, 20.5).has_value());
}

TEST_CASE("label track with t=12 outside a single rock interval") {
    const LabelTrack track({{0.0, 10.0, Terrain::Rock}});
    CHECK(track.label_at(5.0) == Terrain::Rock);
    CHECK(!track.label_at(12.0).has_value());
}

TEST_CASE("label intervals must be ordered and disjoint") {
    CHECK_THROWS_AS(LabelTrack({{5.0, 4.0, Terrain::Rock}}), DataError);
    CHECK_THROWS_AS(LabelTrack({{0.0, 6.0, Terrain::Rock},
                                {5.0, 10.0, Terrain::Loose}}),
                    DataError);
    // Touching intervals are fine; no instant maps to two terrains.
    const LabelTrack track({{0.0, 5.0, Terrain::Rock}, {5.0, 9.0, Terrain::Loose}});
    CHECK(track.label_at(5.0) == Terrain::Loose);
}

TEST_CASE("label csv round trip") {
    testutil::TempDir dir("labels");
    const LabelTrack track({{0.0, 60.5, Terrain::Loose},
                            {60.5, 120.25, Terrain::Compressed},
                            {120.25, 200.0, Terrain::Pebbles}});
    write_labels_csv(track, dir / "labels.csv");
    const auto back = read_labels_csv(dir / "labels.csv");
    REQUIRE(back.intervals().size() == 3);
    CHECK(back.intervals()[1].t_start == 60.5);
    CHECK(back.intervals()[1].terrain == Terrain::Compressed);
    CHECK(back.intervals()[2].t_end == 200.0);

    write_file(dir / "bad.csv", "t_start,t_end,terrain\n0,10,mud\n");
    CHECK_THROWS_AS(read_labels_csv(dir / "bad.csv"), ParseError);
}
