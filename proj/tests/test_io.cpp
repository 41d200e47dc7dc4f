#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "sphgram/io.hpp"

using namespace sphgram;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("sphgram_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("format_double round-trips doubles") {
    for (double v : {1.0 / 3, 1e-300, 3.14159265358979, -0.0, 123456789.123456789}) {
        double back = std::stod(format_double(v));
        CHECK(back == v);
    }
}

TEST_CASE("point set text round trip") {
    TempDir tmp;
    PointSet ps = sample_uniform(2, 25, 7);
    std::string p = tmp.file("pts.txt");
    save_points_text(ps, p);
    PointSet back = load_points_text(p);
    CHECK(back.d == 2);
    CHECK(back.n() == 25);
    CHECK(back.points == ps.points);  // 17 digits round-trip binary doubles
    CHECK(back.provenance.method == Provenance::Method::file);

    std::string first_line = slurp(p).substr(0, slurp(p).find('\n'));
    CHECK(first_line == "d=2 n=25");

    // identical content on repeated saves
    std::string p2 = tmp.file("pts2.txt");
    save_points_text(ps, p2);
    CHECK(slurp(p) == slurp(p2));
}

TEST_CASE("point set json round trip") {
    TempDir tmp;
    PointSet ps = riesz_minimize(1, 5, 3, 50, 1e-6).points;
    std::string p = tmp.file("pts.json");
    save_points(ps, p);  // dispatches on extension
    PointSet back = load_points(p);
    CHECK(back.points == ps.points);
    CHECK(back.d == 1);
}

TEST_CASE("gram binary container round trip") {
    TempDir tmp;
    PointSet ps = sample_uniform(2, 9, 1);
    GramMatrix g = assemble_stiffness(ps, 2, 1, 120);
    std::string p = tmp.file("g.bin");
    save_gram_binary(g, p);
    GramMatrix back = load_gram_binary(p);
    CHECK(back.entries == g.entries);
    CHECK(back.kind == GramKind::stiffness);
    CHECK(back.d == 2);
    CHECK(back.k == 2);
    CHECK(back.s == 1);
    CHECK(back.m_max == 120);
    CHECK(back.tail_bound == g.tail_bound);

    std::string bad = tmp.file("bad.bin");
    std::ofstream(bad) << "not a container";
    CHECK_THROWS(load_gram_binary(bad));
}

TEST_CASE("gram csv carries metadata and all rows") {
    TempDir tmp;
    PointSet ps = sample_uniform(2, 4, 2);
    GramMatrix g = assemble_mass(ps, 1, 100);
    std::string p = tmp.file("g.csv");
    save_gram_csv(g, p);
    std::string text = slurp(p);
    CHECK(text.find("# kind=mass d=2 k=1 s=0 n=4") != std::string::npos);
    int lines = 0;
    for (char c : text)
        if (c == '\n') ++lines;
    CHECK(lines == 5);  // header + 4 rows
}

TEST_CASE("tables to csv and json") {
    TempDir tmp;
    Table t;
    t.columns = {"j", "lambda_j"};
    t.rows = {{1, 4.0}, {2, 1.0}};
    std::string pc = tmp.file("t.csv"), pj = tmp.file("t.json");
    save_table(t, pc, "csv");
    save_table(t, pj, "json");
    std::string csv = slurp(pc);
    CHECK(csv.substr(0, csv.find('\n')) == "j,lambda_j");
    CHECK(slurp(pj).find("\"lambda_j\"") != std::string::npos);
    CHECK_THROWS_AS(save_table(t, tmp.file("t.x"), "xml"), std::invalid_argument);
}

TEST_CASE("missing files raise io errors") {
    CHECK_THROWS(load_points_text("/nonexistent/p.txt"));
    CHECK_THROWS(load_gram_binary("/nonexistent/g.bin"));
}
