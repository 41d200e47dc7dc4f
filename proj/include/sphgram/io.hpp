#pragma once

#include <string>
#include <vector>

#include "sphgram/gram.hpp"
#include "sphgram/points.hpp"
#include "sphgram/spectra.hpp"

namespace sphgram {

/// "%.17g" rendering, enough digits to round-trip binary doubles.
std::string format_double(double v);

/// Point-set text format: line 1 `d=<d> n=<n>`, then one point per line,
/// d+1 whitespace-separated reals at 17 significant digits.
void save_points_text(const PointSet& ps, const std::string& path);
PointSet load_points_text(const std::string& path);

/// JSON alternative: { "d":., "n":., "points":[[..],..], "provenance":{..} }.
void save_points_json(const PointSet& ps, const std::string& path);
PointSet load_points_json(const std::string& path);

/// Auto-detect by extension (.json vs text).
void save_points(const PointSet& ps, const std::string& path);
PointSet load_points(const std::string& path);

/// Dense CSV (n rows, metadata in a leading # comment) and a binary
/// container {magic, kind, d, k, s, n, m_max, weighting, tail_bound,
/// row-major doubles}.
void save_gram_csv(const GramMatrix& g, const std::string& path);
void save_gram_binary(const GramMatrix& g, const std::string& path);
GramMatrix load_gram_binary(const std::string& path);

/// One tabular report row-set: header names plus rows of doubles,
/// written as CSV or as a JSON array of objects.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
void save_table(const Table& t, const std::string& path, const std::string& format);

}  // namespace sphgram
