#pragma once

#include "sofpoly/experiments.hpp"
#include "sofpoly/instances.hpp"
#include "sofpoly/poly.hpp"
#include "sofpoly/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sofpoly {

// Line-oriented text format shared by every file the tools read or write.
//
//   sofpoly <doctype> 1
//   scalar <name> <value>
//   count <name> <integer>
//   string <name> <token>
//   poly <name> <degree>
//     <c0> <c1> ... <cdeg>          (descending powers, c0 = 1)
//   matrix <name> <rows> <cols>
//     <row of cols values>          (rows lines)
//   begin <name>
//     ...                           (nested entries)
//   end
//
// Indentation is cosmetic, blank lines and lines starting with '#' are
// ignored, and every floating point value is printed with 17 significant
// digits so that write/read/write round-trips are byte identical.

// Shortest-faithful decimal form of a finite double (%.17g).
std::string format_double(double value);

class DocWriter {
 public:
  explicit DocWriter(std::ostream& out);

  void begin_document(const std::string& doctype);
  void scalar(const std::string& name, double value);
  void count(const std::string& name, long long value);
  void string_field(const std::string& name, const std::string& token);
  void poly(const std::string& name, const MonicPoly& p);
  void matrix(const std::string& name, const Matrix& m);
  void begin_section(const std::string& name);
  void end_section();

  // Checks that every begin_section was closed.
  void finish();

 private:
  void indent();

  std::ostream& out_;
  int depth_ = 0;
  bool started_ = false;
};

// Parsed body of a document (or of one begin/end section).  Entries keep
// their order of appearance; lookups by name return the first match and
// throw ParseError when the name is absent.
class DocSection {
 public:
  double scalar(const std::string& name) const;
  long long count(const std::string& name) const;
  const std::string& str(const std::string& name) const;
  const MonicPoly& poly(const std::string& name) const;
  const Matrix& matrix(const std::string& name) const;
  const DocSection& section(const std::string& name) const;

  bool has_matrix(const std::string& name) const;
  bool has_poly(const std::string& name) const;

  const std::vector<std::pair<std::string, double>>& scalars() const { return scalars_; }
  const std::vector<std::pair<std::string, long long>>& counts() const { return counts_; }
  const std::vector<std::pair<std::string, std::string>>& strings() const { return strings_; }
  const std::vector<std::pair<std::string, MonicPoly>>& polys() const { return polys_; }
  const std::vector<std::pair<std::string, Matrix>>& matrices() const { return matrices_; }
  const std::vector<std::pair<std::string, DocSection>>& sections() const { return sections_; }

 private:
  friend class DocParser;

  std::vector<std::pair<std::string, double>> scalars_;
  std::vector<std::pair<std::string, long long>> counts_;
  std::vector<std::pair<std::string, std::string>> strings_;
  std::vector<std::pair<std::string, MonicPoly>> polys_;
  std::vector<std::pair<std::string, Matrix>> matrices_;
  std::vector<std::pair<std::string, DocSection>> sections_;
};

struct ParsedDocument {
  std::string doctype;
  DocSection root;
};

ParsedDocument read_document(std::istream& in, const std::string& source_name);

// Reads just the header line so callers can dispatch on the document type.
std::string read_doctype(const std::string& path);

// A plant, optionally with the gain that planted it and the target
// polynomial it is meant to reach.
struct InstanceFile {
  Matrix A;
  Matrix B;
  Matrix C;
  std::optional<Matrix> planted_K;
  std::optional<MonicPoly> target;
};

void write_instance(std::ostream& out, const InstanceFile& inst);
InstanceFile read_instance(std::istream& in, const std::string& source_name);
void write_instance_file(const std::string& path, const InstanceFile& inst);
InstanceFile read_instance_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in, const std::string& source_name);
void write_matrix_file(const std::string& path, const Matrix& m);
Matrix read_matrix_file(const std::string& path);

void write_certificate(std::ostream& out, const Certificate& cert);
Certificate read_certificate(std::istream& in, const std::string& source_name);
void write_certificate_file(const std::string& path, const Certificate& cert);
Certificate read_certificate_file(const std::string& path);

// Reports serialize everything except elapsed wall time, which is run
// dependent and would break byte-identical reruns; reading restores it as 0.
void write_report(std::ostream& out, const ExperimentReport& report);
ExperimentReport read_report(std::istream& in, const std::string& source_name);
void write_report_file(const std::string& path, const ExperimentReport& report);
ExperimentReport read_report_file(const std::string& path);

}  // namespace sofpoly
