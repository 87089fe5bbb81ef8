#include "sofpoly/io.hpp"

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sofpoly {

namespace {

bool valid_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#') return false;
  return true;
}

void check_token(const char* what, const std::string& s) {
  if (!valid_token(s))
    throw DomainError(std::string(what) + " '" + s +
                      "' must be a nonempty token without spaces or '#'");
}

}  // namespace

std::string format_double(double value) {
  if (!std::isfinite(value)) throw DomainError("format_double: value must be finite");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

DocWriter::DocWriter(std::ostream& out) : out_(out) {}

void DocWriter::indent() {
  for (int i = 0; i < depth_; ++i) out_ << "  ";
}

void DocWriter::begin_document(const std::string& doctype) {
  if (started_) throw DomainError("DocWriter: document already started");
  check_token("doctype", doctype);
  out_ << "sofpoly " << doctype << " 1\n";
  started_ = true;
}

void DocWriter::scalar(const std::string& name, double value) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  indent();
  out_ << "scalar " << name << ' ' << format_double(value) << '\n';
}

void DocWriter::count(const std::string& name, long long value) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  indent();
  out_ << "count " << name << ' ' << value << '\n';
}

void DocWriter::string_field(const std::string& name, const std::string& token) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  check_token("string value", token);
  indent();
  out_ << "string " << name << ' ' << token << '\n';
}

void DocWriter::poly(const std::string& name, const MonicPoly& p) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  indent();
  out_ << "poly " << name << ' ' << p.degree() << '\n';
  indent();
  out_ << ' ';
  for (Index i = 0; i <= p.degree(); ++i) out_ << ' ' << format_double(p[i]);
  out_ << '\n';
}

void DocWriter::matrix(const std::string& name, const Matrix& m) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  indent();
  out_ << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  for (Index r = 0; r < m.rows(); ++r) {
    indent();
    out_ << ' ';
    for (Index c = 0; c < m.cols(); ++c) out_ << ' ' << format_double(m(r, c));
    out_ << '\n';
  }
}

void DocWriter::begin_section(const std::string& name) {
  if (!started_) throw DomainError("DocWriter: begin_document first");
  check_token("name", name);
  indent();
  out_ << "begin " << name << '\n';
  ++depth_;
}

void DocWriter::end_section() {
  if (depth_ == 0) throw DomainError("DocWriter: end_section without begin_section");
  --depth_;
  indent();
  out_ << "end\n";
}

void DocWriter::finish() {
  if (depth_ != 0) throw DomainError("DocWriter: unclosed section at finish");
  out_.flush();
}

namespace {

template <class T>
const T& lookup(const std::vector<std::pair<std::string, T>>& entries,
                const std::string& name, const char* kind) {
  for (const auto& [key, value] : entries)
    if (key == name) return value;
  throw ParseError(std::string("document is missing ") + kind + " '" + name + "'");
}

template <class T>
bool contains(const std::vector<std::pair<std::string, T>>& entries,
              const std::string& name) {
  for (const auto& [key, value] : entries)
    if (key == name) return true;
  return false;
}

}  // namespace

double DocSection::scalar(const std::string& name) const {
  return lookup(scalars_, name, "scalar");
}

long long DocSection::count(const std::string& name) const {
  return lookup(counts_, name, "count");
}

const std::string& DocSection::str(const std::string& name) const {
  return lookup(strings_, name, "string");
}

const MonicPoly& DocSection::poly(const std::string& name) const {
  return lookup(polys_, name, "poly");
}

const Matrix& DocSection::matrix(const std::string& name) const {
  return lookup(matrices_, name, "matrix");
}

const DocSection& DocSection::section(const std::string& name) const {
  return lookup(sections_, name, "section");
}

bool DocSection::has_matrix(const std::string& name) const {
  return contains(matrices_, name);
}

bool DocSection::has_poly(const std::string& name) const {
  return contains(polys_, name);
}

class DocParser {
 public:
  DocParser(std::istream& in, std::string source)
      : in_(in), source_(std::move(source)) {}

  ParsedDocument parse() {
    std::vector<std::string> t;
    if (!next_line(t)) fail("empty document");
    if (t.size() != 3 || t[0] != "sofpoly" || t[2] != "1")
      fail("expected header 'sofpoly <doctype> 1'");
    ParsedDocument doc;
    doc.doctype = t[1];
    if (parse_body(doc.root)) fail("'end' without matching 'begin'");
    return doc;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(source_ + ":" + std::to_string(line_) + ": " + msg);
  }

  bool next_line(std::vector<std::string>& toks) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      toks.clear();
      std::istringstream ls(line);
      std::string tok;
      while (ls >> tok) toks.push_back(tok);
      if (toks.empty() || toks[0][0] == '#') continue;
      return true;
    }
    return false;
  }

  void need(const std::vector<std::string>& t, std::size_t n) const {
    if (t.size() != n)
      fail("entry '" + t[0] + "' expects " + std::to_string(n - 1) + " arguments");
  }

  double parse_double(const std::string& tok) const {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (tok.empty() || end != tok.c_str() + tok.size())
      fail("bad number '" + tok + "'");
    if (!std::isfinite(v)) fail("non-finite number '" + tok + "'");
    return v;
  }

  long long parse_int(const std::string& tok) const {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE)
      fail("bad integer '" + tok + "'");
    return v;
  }

  Vector read_values(long long n) {
    if (n == 0) return Vector(0);
    std::vector<std::string> t;
    if (!next_line(t)) fail("unexpected end of input inside a data block");
    if (static_cast<long long>(t.size()) != n)
      fail("expected " + std::to_string(n) + " values, got " + std::to_string(t.size()));
    Vector v(n);
    for (long long i = 0; i < n; ++i) v[i] = parse_double(t[static_cast<std::size_t>(i)]);
    return v;
  }

  // Fills sec until 'end' (returns true) or end of input (returns false).
  bool parse_body(DocSection& sec) {
    std::vector<std::string> t;
    while (next_line(t)) {
      const std::string& kw = t[0];
      if (kw == "end") {
        need(t, 1);
        return true;
      }
      if (kw == "scalar") {
        need(t, 3);
        sec.scalars_.emplace_back(t[1], parse_double(t[2]));
      } else if (kw == "count") {
        need(t, 3);
        sec.counts_.emplace_back(t[1], parse_int(t[2]));
      } else if (kw == "string") {
        need(t, 3);
        sec.strings_.emplace_back(t[1], t[2]);
      } else if (kw == "poly") {
        need(t, 3);
        const long long deg = parse_int(t[2]);
        if (deg < 0) fail("poly degree must be nonnegative");
        const Vector coeffs = read_values(deg + 1);
        try {
          sec.polys_.emplace_back(t[1], MonicPoly(coeffs));
        } catch (const DomainError& e) {
          fail(e.what());
        }
      } else if (kw == "matrix") {
        need(t, 4);
        const long long rows = parse_int(t[2]);
        const long long cols = parse_int(t[3]);
        if (rows < 0 || cols < 0) fail("matrix dimensions must be nonnegative");
        Matrix m(rows, cols);
        for (long long r = 0; r < rows; ++r) m.row(r) = read_values(cols).transpose();
        sec.matrices_.emplace_back(t[1], std::move(m));
      } else if (kw == "begin") {
        need(t, 2);
        DocSection child;
        if (!parse_body(child)) fail("missing 'end' for section '" + t[1] + "'");
        sec.sections_.emplace_back(t[1], std::move(child));
      } else {
        fail("unknown entry '" + kw + "'");
      }
    }
    return false;
  }

  std::istream& in_;
  std::string source_;
  int line_ = 0;
};

ParsedDocument read_document(std::istream& in, const std::string& source_name) {
  return DocParser(in, source_name).parse();
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

void check_write(const std::ostream& out, const std::string& path) {
  if (!out) throw ParseError("write failed for '" + path + "'");
}

void expect_doctype(const ParsedDocument& doc, const std::string& want,
                    const std::string& source) {
  if (doc.doctype != want)
    throw ParseError(source + ": expected doctype '" + want + "', found '" +
                     doc.doctype + "'");
}

}  // namespace

std::string read_doctype(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string word, doctype, version;
  if (!(in >> word >> doctype >> version) || word != "sofpoly")
    throw ParseError(path + ":1: expected header 'sofpoly <doctype> 1'");
  return doctype;
}

void write_instance(std::ostream& out, const InstanceFile& inst) {
  DocWriter w(out);
  w.begin_document("instance");
  w.matrix("A", inst.A);
  w.matrix("B", inst.B);
  w.matrix("C", inst.C);
  if (inst.planted_K) w.matrix("K", *inst.planted_K);
  if (inst.target) w.poly("target", *inst.target);
  w.finish();
}

InstanceFile read_instance(std::istream& in, const std::string& source_name) {
  const ParsedDocument doc = read_document(in, source_name);
  expect_doctype(doc, "instance", source_name);
  InstanceFile f;
  f.A = doc.root.matrix("A");
  f.B = doc.root.matrix("B");
  f.C = doc.root.matrix("C");
  if (doc.root.has_matrix("K")) f.planted_K = doc.root.matrix("K");
  if (doc.root.has_poly("target")) f.target = doc.root.poly("target");
  return f;
}

void write_instance_file(const std::string& path, const InstanceFile& inst) {
  std::ofstream out = open_out(path);
  write_instance(out, inst);
  check_write(out, path);
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_instance(in, path);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  DocWriter w(out);
  w.begin_document("matrix");
  w.matrix("value", m);
  w.finish();
}

Matrix read_matrix(std::istream& in, const std::string& source_name) {
  const ParsedDocument doc = read_document(in, source_name);
  expect_doctype(doc, "matrix", source_name);
  return doc.root.matrix("value");
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path);
  write_matrix(out, m);
  check_write(out, path);
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_matrix(in, path);
}

namespace {

void write_certificate_body(DocWriter& w, const Certificate& cert) {
  w.matrix("A", cert.A);
  w.matrix("B", cert.B);
  w.matrix("C", cert.C);
  w.matrix("K", cert.K);
  w.poly("d", cert.d_claimed);
  w.poly("target", cert.target);
  w.scalar("residual", cert.residual);
}

Certificate read_certificate_body(const DocSection& s) {
  return Certificate{s.matrix("A"),  s.matrix("B"),      s.matrix("C"),
                     s.matrix("K"),  s.poly("d"),        s.poly("target"),
                     s.scalar("residual")};
}

}  // namespace

void write_certificate(std::ostream& out, const Certificate& cert) {
  DocWriter w(out);
  w.begin_document("certificate");
  write_certificate_body(w, cert);
  w.finish();
}

Certificate read_certificate(std::istream& in, const std::string& source_name) {
  const ParsedDocument doc = read_document(in, source_name);
  expect_doctype(doc, "certificate", source_name);
  return read_certificate_body(doc.root);
}

void write_certificate_file(const std::string& path, const Certificate& cert) {
  std::ofstream out = open_out(path);
  write_certificate(out, cert);
  check_write(out, path);
}

Certificate read_certificate_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_certificate(in, path);
}

void write_report(std::ostream& out, const ExperimentReport& report) {
  DocWriter w(out);
  w.begin_document("report");
  w.string_field("experiment", report.experiment);

  w.begin_section("config");
  for (const auto& [key, value] : report.config) w.string_field(key, value);
  w.end_section();

  w.begin_section("histograms");
  for (const Histogram& h : report.histograms) {
    w.begin_section("histogram");
    w.string_field("name", h.name());
    w.count("lo_exp", h.lo_exp());
    w.count("hi_exp", h.hi_exp());
    w.count("underflow", h.underflow());
    w.count("overflow", h.overflow());
    Matrix bins(1, static_cast<Index>(h.bins().size()));
    for (Index k = 0; k < bins.cols(); ++k)
      bins(0, k) = static_cast<double>(h.bins()[static_cast<std::size_t>(k)]);
    w.matrix("bins", bins);
    w.end_section();
  }
  w.end_section();

  w.begin_section("summary");
  for (const auto& [key, value] : report.summary) w.scalar(key, value);
  w.end_section();

  w.begin_section("reps");
  for (const RepRecord& rec : report.reps) {
    w.begin_section("rep");
    w.count("index", rec.index);

    w.begin_section("metrics");
    for (const auto& [key, value] : rec.metrics) w.scalar(key, value);
    w.end_section();

    w.begin_section("certificates");
    for (const auto& [name, cert] : rec.certificates) {
      w.begin_section("certificate");
      w.string_field("name", name);
      write_certificate_body(w, cert);
      w.end_section();
    }
    w.end_section();

    w.begin_section("tables");
    for (const auto& [name, table] : rec.tables) {
      w.begin_section("table");
      w.string_field("name", name);
      w.matrix("value", table);
      w.end_section();
    }
    w.end_section();

    w.end_section();
  }
  w.end_section();

  w.finish();
}

ExperimentReport read_report(std::istream& in, const std::string& source_name) {
  const ParsedDocument doc = read_document(in, source_name);
  expect_doctype(doc, "report", source_name);
  const DocSection& root = doc.root;

  ExperimentReport report;
  report.experiment = root.str("experiment");
  report.config = root.section("config").strings();

  for (const auto& [kind, hs] : root.section("histograms").sections()) {
    if (kind != "histogram")
      throw ParseError(source_name + ": unexpected section '" + kind + "' in histograms");
    const Matrix& bin_row = hs.matrix("bins");
    std::vector<long long> bins(static_cast<std::size_t>(bin_row.cols()));
    for (Index k = 0; k < bin_row.cols(); ++k)
      bins[static_cast<std::size_t>(k)] = std::llround(bin_row(0, k));
    report.histograms.push_back(Histogram::restore(
        hs.str("name"), static_cast<int>(hs.count("lo_exp")),
        static_cast<int>(hs.count("hi_exp")), std::move(bins), hs.count("underflow"),
        hs.count("overflow")));
  }

  report.summary = root.section("summary").scalars();

  for (const auto& [kind, rs] : root.section("reps").sections()) {
    if (kind != "rep")
      throw ParseError(source_name + ": unexpected section '" + kind + "' in reps");
    RepRecord rec;
    rec.index = rs.count("index");
    rec.metrics = rs.section("metrics").scalars();
    for (const auto& [cname, cs] : rs.section("certificates").sections())
      rec.certificates.emplace_back(cs.str("name"), read_certificate_body(cs));
    for (const auto& [tname, ts] : rs.section("tables").sections())
      rec.tables.emplace_back(ts.str("name"), ts.matrix("value"));
    report.reps.push_back(std::move(rec));
  }
  return report;
}

void write_report_file(const std::string& path, const ExperimentReport& report) {
  std::ofstream out = open_out(path);
  write_report(out, report);
  check_write(out, path);
}

ExperimentReport read_report_file(const std::string& path) {
  std::ifstream in = open_in(path);
  return read_report(in, path);
}

}  // namespace sofpoly
