#include "sphgram/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace sphgram {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
    if (!f) throw std::runtime_error("cannot open for reading: " + path);
    return f;
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

json provenance_json(const Provenance& p) {
    json j;
    switch (p.method) {
        case Provenance::Method::random:
            j["method"] = "random";
            j["seed"] = p.seed;
            break;
        case Provenance::Method::riesz:
            j["method"] = "riesz";
            j["seed"] = p.seed;
            j["iterations"] = p.iterations;
            break;
        case Provenance::Method::file:
            j["method"] = "file";
            j["path"] = p.path;
            break;
    }
    return j;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void save_points_text(const PointSet& ps, const std::string& path) {
    auto f = open_out(path);
    f << "d=" << ps.d << " n=" << ps.n() << "\n";
    for (int i = 0; i < ps.n(); ++i) {
        for (int c = 0; c <= ps.d; ++c) {
            if (c) f << ' ';
            f << format_double(ps.points(i, c));
        }
        f << "\n";
    }
}

PointSet load_points_text(const std::string& path) {
    auto f = open_in(path);
    std::string header;
    std::getline(f, header);
    int d = 0, n = 0;
    if (std::sscanf(header.c_str(), "d=%d n=%d", &d, &n) != 2)
        throw std::runtime_error("bad point-set header in " + path);
    PointSet ps;
    ps.d = d;
    ps.points.resize(n, d + 1);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c <= d; ++c)
            if (!(f >> ps.points(i, c)))
                throw std::runtime_error("truncated point-set file " + path);
    ps.provenance = {Provenance::Method::file, 0, 0, path};
    ps.validate();
    return ps;
}

void save_points_json(const PointSet& ps, const std::string& path) {
    json j;
    j["d"] = ps.d;
    j["n"] = ps.n();
    json pts = json::array();
    for (int i = 0; i < ps.n(); ++i) {
        json row = json::array();
        for (int c = 0; c <= ps.d; ++c) row.push_back(ps.points(i, c));
        pts.push_back(row);
    }
    j["points"] = pts;
    j["provenance"] = provenance_json(ps.provenance);
    open_out(path) << j.dump(1) << "\n";
}

PointSet load_points_json(const std::string& path) {
    json j = json::parse(open_in(path));
    PointSet ps;
    ps.d = j.at("d").get<int>();
    int n = j.at("n").get<int>();
    const json& pts = j.at("points");
    if ((int)pts.size() != n) throw std::runtime_error("point count mismatch in " + path);
    ps.points.resize(n, ps.d + 1);
    for (int i = 0; i < n; ++i)
        for (int c = 0; c <= ps.d; ++c) ps.points(i, c) = pts[i][c].get<double>();
    ps.provenance = {Provenance::Method::file, 0, 0, path};
    ps.validate();
    return ps;
}

void save_points(const PointSet& ps, const std::string& path) {
    if (ends_with(path, ".json"))
        save_points_json(ps, path);
    else
        save_points_text(ps, path);
}

PointSet load_points(const std::string& path) {
    return ends_with(path, ".json") ? load_points_json(path) : load_points_text(path);
}

void save_gram_csv(const GramMatrix& g, const std::string& path) {
    auto f = open_out(path);
    f << "# kind=" << (g.kind == GramKind::mass ? "mass" : "stiffness") << " d=" << g.d
      << " k=" << g.k << " s=" << g.s << " n=" << g.n() << " mmax=" << g.m_max
      << " weighting=" << (g.weighting == Weighting::uniform_tau ? "uniform_tau" : "none")
      << " tail_bound=" << format_double(g.tail_bound) << "\n";
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) {
            if (j) f << ',';
            f << format_double(g.entries(i, j));
        }
        f << "\n";
    }
}

namespace {
constexpr char kGramMagic[8] = {'S', 'P', 'H', 'G', 'R', 'A', 'M', '1'};
}

void save_gram_binary(const GramMatrix& g, const std::string& path) {
    auto f = open_out(path, true);
    f.write(kGramMagic, 8);
    std::int64_t hdr[7] = {g.kind == GramKind::mass ? 0 : 1, g.d,       g.k, g.s,
                           g.n(),                           g.m_max,
                           g.weighting == Weighting::uniform_tau ? 1 : 0};
    f.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    f.write(reinterpret_cast<const char*>(&g.tail_bound), sizeof(double));
    std::vector<double> row(g.n());
    for (int i = 0; i < g.n(); ++i) {
        for (int j = 0; j < g.n(); ++j) row[j] = g.entries(i, j);
        f.write(reinterpret_cast<const char*>(row.data()), sizeof(double) * g.n());
    }
}

GramMatrix load_gram_binary(const std::string& path) {
    auto f = open_in(path, true);
    char magic[8];
    f.read(magic, 8);
    if (!f || std::memcmp(magic, kGramMagic, 8) != 0)
        throw std::runtime_error("not a gram container: " + path);
    std::int64_t hdr[7];
    f.read(reinterpret_cast<char*>(hdr), sizeof hdr);
    GramMatrix g;
    g.kind = hdr[0] == 0 ? GramKind::mass : GramKind::stiffness;
    g.d = (int)hdr[1];
    g.k = (int)hdr[2];
    g.s = (int)hdr[3];
    int n = (int)hdr[4];
    g.m_max = (int)hdr[5];
    g.weighting = hdr[6] ? Weighting::uniform_tau : Weighting::unweighted;
    f.read(reinterpret_cast<char*>(&g.tail_bound), sizeof(double));
    g.entries.resize(n, n);
    std::vector<double> row(n);
    for (int i = 0; i < n; ++i) {
        f.read(reinterpret_cast<char*>(row.data()), sizeof(double) * n);
        for (int j = 0; j < n; ++j) g.entries(i, j) = row[j];
    }
    if (!f) throw std::runtime_error("truncated gram container: " + path);
    return g;
}

void save_table(const Table& t, const std::string& path, const std::string& format) {
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : t.rows) {
            json obj;
            for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = r[c];
            rows.push_back(obj);
        }
        open_out(path) << json{{"rows", rows}}.dump(1) << "\n";
        return;
    }
    if (format != "csv") throw std::invalid_argument("unknown table format: " + format);
    auto f = open_out(path);
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) f << ',';
        f << t.columns[c];
    }
    f << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t c = 0; c < r.size(); ++c) {
            if (c) f << ',';
            f << format_double(r[c]);
        }
        f << "\n";
    }
}

}  // namespace sphgram
