#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "fraghmm/ingest.hpp"

using namespace fraghmm;

namespace {

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    REQUIRE(out.good());
}

}  // namespace

TEST_CASE("missing policy names parse") {
    CHECK(parse_missing_policy("error") == MissingPolicy::kError);
    CHECK(parse_missing_policy("drop") == MissingPolicy::kDrop);
    CHECK(parse_missing_policy("forward-fill") == MissingPolicy::kForwardFill);
    CHECK_THROWS_AS(parse_missing_policy("zap"), std::invalid_argument);
}

TEST_CASE("load_csv reads the requested column") {
    TempDir tmp;
    const std::string path = tmp.file("basic.csv");
    write_file(path, "date,price,volume\n2020-01-01,1.5,100\n2020-01-02,2.25,200\n2020-01-03,-0.5,50\n");
    const RawSeries s = load_csv(path, "price");
    CHECK(s.values == std::vector<double>{1.5, 2.25, -0.5});
    CHECK(s.column == "price");
    CHECK(s.source == path);
}

TEST_CASE("load_csv handles CRLF endings, blank lines, and delimiters") {
    TempDir tmp;
    const std::string path = tmp.file("crlf.csv");
    write_file(path, "a;b\r\n1;10\r\n\r\n2;20\r\n");
    const RawSeries s = load_csv(path, "b", MissingPolicy::kError, ';');
    CHECK(s.values == std::vector<double>{10.0, 20.0});
}

TEST_CASE("missing policies behave as named") {
    TempDir tmp;
    const std::string path = tmp.file("gaps.csv");
    write_file(path, "x\n1\nNA\n3\nnull\n5\n");

    CHECK_THROWS_WITH_AS(static_cast<void>(load_csv(path, "x", MissingPolicy::kError)),
                         doctest::Contains("row 3"), std::runtime_error);

    const RawSeries dropped = load_csv(path, "x", MissingPolicy::kDrop);
    CHECK(dropped.values == std::vector<double>{1.0, 3.0, 5.0});

    const RawSeries filled = load_csv(path, "x", MissingPolicy::kForwardFill);
    CHECK(filled.values == std::vector<double>{1.0, 1.0, 3.0, 3.0, 5.0});
}

TEST_CASE("forward fill with a missing first value is an error") {
    TempDir tmp;
    const std::string path = tmp.file("leading_gap.csv");
    write_file(path, "x\nNA\n2\n");
    CHECK_THROWS_AS(static_cast<void>(load_csv(path, "x", MissingPolicy::kForwardFill)),
                    std::runtime_error);
}

TEST_CASE("load_csv errors carry useful context") {
    TempDir tmp;
    const std::string path = tmp.file("bad.csv");
    write_file(path, "a,b\n1,2\nx,3\n");
    CHECK_THROWS_WITH_AS(static_cast<void>(load_csv(path, "a")), doctest::Contains("row 3"),
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(static_cast<void>(load_csv(path, "zzz")), doctest::Contains("a, b"),
                         std::runtime_error);
    CHECK_THROWS_AS(static_cast<void>(load_csv(tmp.file("absent.csv"), "a")), std::runtime_error);
}

TEST_CASE("three-bin discretization of 1..9 splits into even terciles") {
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    DiscretizationSpec spec;
    const Sequence seq = discretize(v, 3, &spec);
    CHECK(seq.symbols() == std::vector<int>{0, 0, 0, 1, 1, 1, 2, 2, 2});
    CHECK(seq.alphabet_size() == 3);
    REQUIRE(spec.cut_points.size() == 2);
    // 1/3 and 2/3 quantiles of 1..9 via linear interpolation
    CHECK(spec.cut_points[0] == doctest::Approx(3.6666666666666665).epsilon(1e-15));
    CHECK(spec.cut_points[1] == doctest::Approx(6.333333333333333).epsilon(1e-15));
    CHECK(spec.labels == std::vector<std::string>{"low", "medium", "high"});
}

TEST_CASE("cut points do not depend on input order") {
    const std::vector<double> sorted = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    const std::vector<double> shuffled = {9, 1, 5, 3, 7, 2, 8, 4, 6};
    DiscretizationSpec a, b;
    discretize(sorted, 3, &a);
    discretize(shuffled, 3, &b);
    CHECK(a.cut_points == b.cut_points);
}

TEST_CASE("a value equal to a cut point goes to the upper bin") {
    DiscretizationSpec spec;
    spec.cut_points = {1.0, 2.0};
    spec.labels = {"low", "medium", "high"};
    CHECK(encode_value(spec, 0.5) == 0);
    CHECK(encode_value(spec, 1.0) == 1);
    CHECK(encode_value(spec, 1.5) == 1);
    CHECK(encode_value(spec, 2.0) == 2);
    CHECK(encode_value(spec, 99.0) == 2);
}

TEST_CASE("bin occupancies are near-equal on a smooth sample") {
    // deterministic smooth values; terciles should land ~n/3 each
    std::vector<double> v;
    for (int i = 0; i < 9999; ++i) {
        v.push_back(std::sin(0.001 * i) + 0.0001 * i);
    }
    const Sequence seq = discretize(v, 3);
    std::vector<int> counts(3, 0);
    for (int s : seq.symbols()) {
        REQUIRE(s >= 0);
        REQUIRE(s < 3);
        ++counts[static_cast<std::size_t>(s)];
    }
    for (int c : counts) {
        CHECK(std::abs(c - 3333) <= 2);
    }
}

TEST_CASE("every encoded symbol is below the bin count for many bin choices") {
    std::vector<double> v;
    for (int i = 0; i < 500; ++i) v.push_back(std::cos(0.37 * i) * (1.0 + 0.01 * i));
    for (int bins : {2, 3, 5, 8}) {
        const Sequence seq = discretize(v, bins);
        CHECK(seq.alphabet_size() == bins);
        for (int s : seq.symbols()) {
            CHECK(s >= 0);
            CHECK(s < bins);
        }
    }
}

TEST_CASE("constant series cannot be binned") {
    const std::vector<double> v(50, 3.14);
    CHECK_THROWS_WITH_AS(static_cast<void>(discretize(v, 3)), doctest::Contains("fewer bins"),
                         std::runtime_error);
}

TEST_CASE("heavily tied data with coincident cuts is rejected") {
    std::vector<double> v(98, 1.0);
    v.push_back(0.0);
    v.push_back(2.0);
    CHECK_THROWS_AS(static_cast<void>(discretize(v, 3)), std::runtime_error);
}

TEST_CASE("spec construction validates its inputs") {
    CHECK_THROWS_AS(static_cast<void>(make_quantile_spec({1.0, 2.0}, 1)), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(make_quantile_spec({1.0}, 2)), std::invalid_argument);
    CHECK_THROWS_AS(static_cast<void>(make_quantile_spec({1.0, std::nan("")}, 2)),
                    std::invalid_argument);
}

TEST_CASE("non-tercile bin counts get generic labels") {
    const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8};
    DiscretizationSpec spec;
    discretize(v, 4, &spec);
    CHECK(spec.labels == std::vector<std::string>{"bin_0", "bin_1", "bin_2", "bin_3"});
}

TEST_CASE("spec JSON round-trips exactly") {
    const std::vector<double> v = {0.11, 5.2, 3.9, 2.7, 8.05, 1.31, 6.6, 4.44, 7.2};
    DiscretizationSpec spec;
    discretize(v, 3, &spec);
    const std::string text = spec_to_json(spec);
    const DiscretizationSpec back = parse_spec_json(text);
    CHECK(back.cut_points == spec.cut_points);
    CHECK(back.labels == spec.labels);
    // re-encode under the round-tripped spec: identical symbols
    CHECK(encode_with_spec(back, v).symbols() == encode_with_spec(spec, v).symbols());
}

TEST_CASE("spec files save and load") {
    TempDir tmp;
    DiscretizationSpec spec;
    spec.cut_points = {-0.25, 1.75};
    spec.labels = {"low", "medium", "high"};
    const std::string path = tmp.file("spec.json");
    save_spec(spec, path);
    const DiscretizationSpec back = load_spec(path);
    CHECK(back.cut_points == spec.cut_points);
    CHECK(back.labels == spec.labels);
}

TEST_CASE("spec JSON validation rejects malformed content") {
    CHECK_THROWS(static_cast<void>(parse_spec_json("not json")));
    CHECK_THROWS(static_cast<void>(parse_spec_json(R"({"cut_points": [2.0, 1.0], "labels": ["a","b","c"]})")));
    CHECK_THROWS(static_cast<void>(parse_spec_json(R"({"cut_points": [1.0, 2.0], "labels": ["a","b"]})")));
    CHECK_THROWS(static_cast<void>(parse_spec_json(R"({"labels": ["a","b"]})")));
}

TEST_CASE("reapplying a saved spec reproduces the discretization") {
    // the pipeline invariant: discretize once, persist the spec, re-encode the
    // same raw values later, and get the same symbol sequence
    std::vector<double> v;
    for (int i = 0; i < 2000; ++i) v.push_back(std::sin(0.31 * i) * 3.0 + 0.001 * i);
    DiscretizationSpec spec;
    const Sequence first = discretize(v, 3, &spec);
    const DiscretizationSpec reloaded = parse_spec_json(spec_to_json(spec));
    const Sequence second = encode_with_spec(reloaded, v);
    CHECK(first.symbols() == second.symbols());
    CHECK(first.alphabet_size() == second.alphabet_size());
}
