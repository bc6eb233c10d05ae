#pragma once

#include <iosfwd>
#include <string>
#include <utility>

#include "lssdp/generators.hpp"
#include "lssdp/instance.hpp"

namespace lssdp {

// Biq Mac style sparse objective:
//   line 1: "<n> <nnz>"
//   then nnz triples "<i> <j> <v>" (1-based). Off-diagonal triples fill Q
//   symmetrically (duplicates summed); diagonal triples are the linear
//   term c. Q carries a zero diagonal so print/parse round-trips.
std::pair<Mat, Vec> parse_biqmac(const std::string& text);
std::string print_biqmac(const Mat& q, const Vec& c);

// rudy graph: "<n> <m>" then m lines "<i> <j> <w>" (1-based endpoints).
Graph parse_rudy(const std::string& text);
std::string print_rudy(const Graph& g);

// QAPLIB: "<n>" then the entries of A then B, whitespace/newline tolerant.
std::pair<Mat, Mat> parse_qaplib(const std::string& text);
std::string print_qaplib(const Mat& a, const Mat& b);

// Native line-oriented interchange format with sections
// [meta], [AE], [AI], [G], [g], [P], [K]; infinities spelled inf/-inf.
// Grammar is documented in the repo README.
std::string print_instance(const LssdpInstance& inst);
LssdpInstance parse_instance(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace lssdp
