#include <doctest.h>

#include <string>

#include "acrank/dataset.hpp"
#include "acrank/errors.hpp"
#include "test_support.hpp"

using namespace acrank;
using testsupport::TempFile;

TEST_CASE("three-row file parses") {
    TempFile f("basic.csv", "y1,z1\n1,1\n2,2\n3,3\n");
    const Dataset ds = load_csv(f.path(), 1, 1);
    CHECK(ds.n() == 3);
    CHECK(ds.y(0, 0) == 1.0);
    CHECK(ds.z(2, 0) == 3.0);
    CHECK(!ds.x.has_value());
}

TEST_CASE("column order in the file is immaterial") {
    TempFile f("order.csv", "z1,y2,y1\n9,2,1\n8,4,3\n");
    const Dataset ds = load_csv(f.path(), 2, 1);
    CHECK(ds.y(0, 0) == 1.0);
    CHECK(ds.y(0, 1) == 2.0);
    CHECK(ds.z(0, 0) == 9.0);
}

TEST_CASE("hundred finite rows with two y columns") {
    std::string body = "y1,y2,z1\n";
    for (int i = 0; i < 100; ++i) {
        body += std::to_string(i) + "," + std::to_string(2 * i) + "," + std::to_string(i % 7) + "\n";
    }
    TempFile f("hundred.csv", body);
    const Dataset ds = load_csv(f.path(), 2, 1);
    CHECK(ds.n() == 100);
    CHECK(ds.y.cols() == 2);
    CHECK(ds.z.cols() == 1);
}

TEST_CASE("NaN cell is rejected with its location") {
    TempFile f("nan.csv", "y1,z1\n1,1\nNaN,2\n");
    try {
        load_csv(f.path(), 1, 1);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 3") != std::string::npos);
        CHECK(msg.find("y1") != std::string::npos);
    }
}

TEST_CASE("missing column, non-numeric cell, empty file") {
    TempFile missing("missing.csv", "y1,z2\n1,2\n");
    CHECK_THROWS_AS(load_csv(missing.path(), 1, 1), InputError);

    TempFile alpha("alpha.csv", "y1,z1\n1,abc\n");
    CHECK_THROWS_AS(load_csv(alpha.path(), 1, 1), InputError);

    TempFile header_only("empty.csv", "y1,z1\n");
    CHECK_THROWS_AS(load_csv(header_only.path(), 1, 1), InputError);

    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", 1, 1), InputError);
}

TEST_CASE("x columns load when requested") {
    TempFile f("withx.csv", "y1,z1,x1,x2\n1,2,3,4\n5,6,7,8\n");
    const Dataset ds = load_csv(f.path(), 1, 1, 2);
    REQUIRE(ds.x.has_value());
    CHECK((*ds.x)(1, 1) == 8.0);
}

TEST_CASE("point CSVs load with or without a header") {
    TempFile with_header("pts1.csv", "c1,c2\n1,2\n3,4\n");
    const Eigen::MatrixXd a = load_points_csv(with_header.path());
    CHECK(a.rows() == 2);
    CHECK(a(1, 1) == 4.0);

    TempFile without("pts2.csv", "1,2\n3,4\n5,6\n");
    const Eigen::MatrixXd b = load_points_csv(without.path());
    CHECK(b.rows() == 3);
    CHECK(b(2, 0) == 5.0);

    TempFile ragged("pts3.csv", "1,2\n3\n");
    CHECK_THROWS_AS(load_points_csv(ragged.path()), InputError);
}
