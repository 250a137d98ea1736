#include <doctest.h>

#include <fstream>

#include "coxstab/dataset.hpp"
#include "coxstab/rng.hpp"
#include "test_helpers.hpp"

using namespace coxstab;
using coxstab::testing::TempDir;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("load_dataset sorts rows by time, stable on ties") {
    TempDir dir("load");
    write_file(dir.file("f.csv"),
               "time,event,a,b\n"
               "5,1,10,11\n"
               "2,1,20,21\n"
               "9,0,30,31\n");
    write_file(dir.file("m.csv"),
               "name,code,window_id,event_key\n"
               "a,A1,0,A1\n"
               "b,B1,0,B1\n");
    const SurvivalDataset ds = load_dataset(dir.file("f.csv"), dir.file("m.csv"));
    CHECK(ds.n() == 3);
    CHECK(ds.times[0] == 2);
    CHECK(ds.times[1] == 5);
    CHECK(ds.times[2] == 9);
    CHECK(ds.events == std::vector<std::uint8_t>{1, 1, 0});
    CHECK(ds.X(0, 0) == 20);
    CHECK(ds.X(1, 0) == 10);
    CHECK(ds.X(2, 1) == 31);
    CHECK_FALSE(ds.standardized);
    CHECK(ds.meta[0].name == "a");
    CHECK(ds.meta[1].code == "B1");
}

TEST_CASE("load_dataset rejects non-positive time naming the line") {
    TempDir dir("badtime");
    write_file(dir.file("f.csv"),
               "time,event,a\n"
               "5,1,1\n"
               "2,1,2\n"
               "0,0,3\n");
    write_file(dir.file("m.csv"), "name,code,window_id,event_key\na,A1,0,A1\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")),
                         doctest::Contains("line 4"), ParseError);
}

TEST_CASE("load_dataset rejects meta/feature mismatch") {
    TempDir dir("mismatch");
    write_file(dir.file("f.csv"), "time,event,a,b\n1,1,0,0\n");
    write_file(dir.file("m.csv"),
               "name,code,window_id,event_key\n"
               "a,A1,0,A1\nb,B1,0,B1\nc,C1,0,C1\n");
    CHECK_THROWS_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")), ParseError);
}

TEST_CASE("load_dataset rejects non-numeric cells naming line and column") {
    TempDir dir("nonnum");
    write_file(dir.file("f.csv"), "time,event,a\n1,1,0\n2,1,oops\n");
    write_file(dir.file("m.csv"), "name,code,window_id,event_key\na,A1,0,A1\n");
    CHECK_THROWS_WITH_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")),
                         doctest::Contains("line 3, column 3"), ParseError);

    SUBCASE("inf and nan spellings are rejected too") {
        write_file(dir.file("f.csv"), "time,event,a\n1,1,inf\n");
        CHECK_THROWS_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")), ParseError);
        write_file(dir.file("f.csv"), "time,event,a\n1,1,nan\n");
        CHECK_THROWS_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")), ParseError);
    }
    SUBCASE("duplicate feature columns are rejected") {
        write_file(dir.file("f.csv"), "time,event,a,a\n1,1,0,0\n");
        CHECK_THROWS_WITH_AS(load_dataset(dir.file("f.csv"), dir.file("m.csv")),
                             doctest::Contains("duplicate"), ParseError);
    }
}

TEST_CASE("standardize centers and scales with population sd") {
    const SurvivalDataset ds =
        testing::make_dataset({{1.0, 4.0}, {3.0, 4.0}}, {1.0, 2.0}, {1, 1});
    const SurvivalDataset std_ds = standardize(ds);
    CHECK(std_ds.X(0, 0) == doctest::Approx(-1.0));
    CHECK(std_ds.X(1, 0) == doctest::Approx(1.0));
    CHECK(std_ds.orig_means[0] == doctest::Approx(2.0));
    CHECK(std_ds.orig_sds[0] == doctest::Approx(1.0));
    // constant column: centered only, sd recorded as 0
    CHECK(std_ds.X(0, 1) == 0.0);
    CHECK(std_ds.X(1, 1) == 0.0);
    CHECK(std_ds.orig_sds[1] == 0.0);
    CHECK(std_ds.standardized);
    CHECK_THROWS_AS(standardize(std_ds), ContractError);
}

TEST_CASE("standardized columns have mean 0 and sd 1") {
    Rng rng(6);
    const SurvivalDataset ds = standardize(testing::random_dataset(rng, 40, 6, 0.2));
    Eigen::VectorXd means, sds;
    column_moments(ds.X, means, sds);
    for (int j = 0; j < ds.p(); ++j) {
        CHECK(std::abs(means[j]) < 1e-9);
        if (ds.orig_sds[j] > 0) CHECK(std::abs(sds[j] - 1.0) < 1e-9);
    }
}

TEST_CASE("standardize is idempotent on standardized data") {
    Rng rng(3);
    const SurvivalDataset ds = testing::random_dataset(rng, 25, 4, 0.3);
    const SurvivalDataset once = standardize(ds);
    SurvivalDataset again_in = once;
    again_in.standardized = false;
    const SurvivalDataset twice = standardize(again_in);
    CHECK((twice.X - once.X).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("standardize then un-standardize recovers the original") {
    Rng rng(4);
    const SurvivalDataset ds = testing::random_dataset(rng, 30, 5, 0.2);
    const SurvivalDataset std_ds = standardize(ds);
    Eigen::MatrixXd recovered = std_ds.X;
    for (int j = 0; j < ds.p(); ++j) {
        if (std_ds.orig_sds[j] > 0) recovered.col(j) *= std_ds.orig_sds[j];
        recovered.col(j).array() += std_ds.orig_means[j];
    }
    CHECK((recovered - ds.X).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("save/load round trip") {
    Rng rng(5);
    SurvivalDataset ds = testing::random_dataset(rng, 20, 3, 0.4, false);
    TempDir dir("roundtrip");
    save_dataset(ds, dir.file("f.csv"), dir.file("m.csv"));
    const SurvivalDataset back = load_dataset(dir.file("f.csv"), dir.file("m.csv"));
    CHECK((back.X - ds.X).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((back.times - ds.times).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(back.events == ds.events);
    CHECK(back.meta[2].code == ds.meta[2].code);
}

TEST_CASE("aggregate_events counts codes per window") {
    const std::vector<Window> windows{{0, 90}, {90, 365}};
    const std::vector<IndexAdmission> adm{{"p1", 30.0, true}, {"p2", 60.0, false}};

    SUBCASE("one event per window") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", 10},
                                           {"p1", "I50", "I50", 100}};
        const SurvivalDataset ds = aggregate_events(stream, windows, adm);
        CHECK(ds.p() == 2);
        CHECK(ds.meta[0].code == "I50");
        CHECK(ds.meta[0].window_id == 0);
        CHECK(ds.meta[1].window_id == 1);
        // p1 sorted first (time 30)
        CHECK(ds.X(0, 0) == 1.0);
        CHECK(ds.X(0, 1) == 1.0);
        // p2 had no events at all
        CHECK(ds.X(1, 0) == 0.0);
        CHECK(ds.X(1, 1) == 0.0);
    }

    SUBCASE("two events in the same window count 2") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", 10}, {"p1", "I50", "I50", 10}};
        const SurvivalDataset ds = aggregate_events(stream, windows, adm);
        CHECK(ds.p() == 1);
        CHECK(ds.X(0, 0) == 2.0);
    }

    SUBCASE("windows are half-open: day 90 falls in [90,365), not [0,90)") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", 90}};
        const SurvivalDataset ds = aggregate_events(stream, windows, adm);
        CHECK(ds.p() == 1);
        CHECK(ds.meta[0].window_id == 1);
        CHECK(ds.X(0, 0) == 1.0);
    }

    SUBCASE("events outside every window create no feature") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", 10}, {"p1", "J18", "J18", 400}};
        const SurvivalDataset ds = aggregate_events(stream, windows, adm);
        CHECK(ds.p() == 1);
        CHECK(ds.meta[0].code == "I50");
    }

    SUBCASE("empty stream is an error") {
        CHECK_THROWS_AS(aggregate_events({}, windows, adm), ContractError);
    }

    SUBCASE("negative days is an error") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", -1}};
        CHECK_THROWS_AS(aggregate_events(stream, windows, adm), ContractError);
    }

    SUBCASE("overlapping windows are an error") {
        const std::vector<RawEvent> stream{{"p1", "I50", "I50", 10}};
        CHECK_THROWS_AS(aggregate_events(stream, {{0, 90}, {60, 120}}, adm), ContractError);
    }
}
