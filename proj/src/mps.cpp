#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "lasercon/milp.hpp"

namespace lasercon::milp {

namespace {

constexpr const char* kObjRow = "LCOBJ";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void field(std::ostringstream& out, const std::string& a, const std::string& b, const std::string& c) {
  char buf[256];
  if (a.size() <= 8 && b.size() <= 8) {
    std::snprintf(buf, sizeof buf, "    %-8s  %-8s  %s\n", a.c_str(), b.c_str(), c.c_str());
    out << buf;
  } else {
    out << "    " << a << "  " << b << "  " << c << '\n';
  }
}

char sense_code(Sense s) {
  switch (s) {
    case Sense::LessEqual: return 'L';
    case Sense::GreaterEqual: return 'G';
    case Sense::Equal: return 'E';
  }
  return 'L';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_number(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": bad number '" + tok + "'");
  }
}

}  // namespace

std::string to_mps(const MilpModel& model) {
  model.validate();
  std::ostringstream out;
  for (const auto& [key, value] : model.metadata) out << "* @meta " << key << ' ' << value << '\n';
  out << "NAME          " << model.name << '\n';
  out << "OBJSENSE\n    MAX\n";
  out << "ROWS\n";
  out << " N  " << kObjRow << '\n';
  for (const auto& c : model.constraints()) out << ' ' << sense_code(c.sense) << "  " << c.name << '\n';

  std::vector<std::vector<std::pair<std::size_t, double>>> columns(model.num_variables());
  for (std::size_t r = 0; r < model.num_constraints(); ++r) {
    for (const Term& t : model.constraints()[r].terms) columns[t.var].emplace_back(r, t.coef);
  }
  out << "COLUMNS\n";
  if (model.num_variables() > 0) {
    out << "    MARKER                 'MARKER'                 'INTORG'\n";
  }
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    const std::string& name = model.variables()[j].name;
    const double c = model.objective()[j];
    if (c != 0.0 || columns[j].empty()) field(out, name, kObjRow, num(c));
    for (const auto& [r, coef] : columns[j]) field(out, name, model.constraints()[r].name, num(coef));
  }
  if (model.num_variables() > 0) {
    out << "    MARKER                 'MARKER'                 'INTEND'\n";
  }
  out << "RHS\n";
  for (const auto& c : model.constraints()) {
    if (c.rhs != 0.0) field(out, "RHS", c.name, num(c.rhs));
  }
  out << "BOUNDS\n";
  for (const auto& v : model.variables()) {
    char buf[256];
    std::snprintf(buf, sizeof buf, " UP BND       %-8s  1\n", v.name.c_str());
    out << buf;
  }
  out << "ENDATA\n";
  return out.str();
}

MilpModel parse_mps(const std::string& text) {
  enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };
  MilpModel model;
  model.name.clear();
  Section section = Section::None;
  bool minimize = false;
  std::string obj_row;

  struct RowData {
    std::string name;
    Sense sense;
    double rhs = 0.0;
    std::vector<Term> terms;
  };
  std::vector<RowData> rows;
  std::unordered_map<std::string, std::size_t> row_index;
  std::unordered_map<std::string, std::size_t> var_index;
  std::vector<std::string> var_names;
  std::vector<double> objective;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": " + msg);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("* @meta ", 0) == 0) {
      const std::string rest = line.substr(8);
      const auto space = rest.find(' ');
      if (space == std::string::npos) fail("metadata line needs a key and a value");
      model.metadata[rest.substr(0, space)] = rest.substr(space + 1);
      continue;
    }
    if (line.empty() || line[0] == '*') continue;
    const auto tok = split(line);
    if (tok.empty()) continue;

    if (line[0] != ' ' && line[0] != '\t') {
      const std::string& head = tok[0];
      if (head == "NAME") {
        section = Section::Name;
        model.name = tok.size() > 1 ? tok[1] : "";
      } else if (head == "OBJSENSE") {
        section = Section::ObjSense;
        if (tok.size() > 1) minimize = tok[1] == "MIN" || tok[1] == "MINIMIZE";
      } else if (head == "ROWS") {
        section = Section::Rows;
      } else if (head == "COLUMNS") {
        section = Section::Columns;
      } else if (head == "RHS") {
        section = Section::Rhs;
      } else if (head == "BOUNDS") {
        section = Section::Bounds;
      } else if (head == "RANGES") {
        fail("RANGES section is not supported");
      } else if (head == "ENDATA") {
        section = Section::End;
        break;
      } else {
        fail("unknown section '" + head + "'");
      }
      continue;
    }

    switch (section) {
      case Section::ObjSense:
        minimize = tok[0] == "MIN" || tok[0] == "MINIMIZE";
        break;
      case Section::Rows: {
        if (tok.size() != 2) fail("ROWS entry needs a type and a name");
        const std::string& type = tok[0];
        if (type == "N") {
          if (obj_row.empty()) obj_row = tok[1];
          break;
        }
        Sense sense;
        if (type == "L") {
          sense = Sense::LessEqual;
        } else if (type == "G") {
          sense = Sense::GreaterEqual;
        } else if (type == "E") {
          sense = Sense::Equal;
        } else {
          fail("unknown row type '" + type + "'");
        }
        if (!row_index.emplace(tok[1], rows.size()).second) fail("duplicate row " + tok[1]);
        rows.push_back({tok[1], sense, 0.0, {}});
        break;
      }
      case Section::Columns: {
        if (tok.size() >= 3 && tok[1] == "'MARKER'") break;
        if (tok.size() != 3 && tok.size() != 5) fail("COLUMNS entry needs 3 or 5 fields");
        auto [it, inserted] = var_index.emplace(tok[0], var_names.size());
        if (inserted) {
          var_names.push_back(tok[0]);
          objective.push_back(0.0);
        }
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double v = parse_number(tok[f + 1], line_no);
          if (tok[f] == obj_row) {
            objective[it->second] += v;
          } else {
            const auto r = row_index.find(tok[f]);
            if (r == row_index.end()) fail("unknown row " + tok[f]);
            rows[r->second].terms.push_back({it->second, v});
          }
        }
        break;
      }
      case Section::Rhs: {
        if (tok.size() != 3 && tok.size() != 5) fail("RHS entry needs 3 or 5 fields");
        for (std::size_t f = 1; f + 1 < tok.size(); f += 2) {
          const double v = parse_number(tok[f + 1], line_no);
          if (tok[f] == obj_row) continue;
          const auto r = row_index.find(tok[f]);
          if (r == row_index.end()) fail("unknown row " + tok[f]);
          rows[r->second].rhs = v;
        }
        break;
      }
      case Section::Bounds: {
        if (tok.size() < 3) fail("BOUNDS entry too short");
        const std::string& type = tok[0];
        if (!var_index.count(tok[2])) fail("bound on unknown column " + tok[2]);
        if (type == "BV") break;
        if (tok.size() != 4) fail("BOUNDS entry needs a value");
        const double v = parse_number(tok[3], line_no);
        const bool ok = (type == "UP" && v == 1.0) || (type == "LO" && v == 0.0);
        if (!ok) fail("only binary bounds are supported");
        break;
      }
      default:
        fail("data outside of a section");
    }
  }
  if (section != Section::End) throw Error(ErrorKind::ParseError, "missing ENDATA");

  for (std::size_t j = 0; j < var_names.size(); ++j) {
    model.add_variable(var_names[j], minimize ? -objective[j] : objective[j]);
  }
  for (auto& r : rows) model.add_constraint(r.name, std::move(r.terms), r.sense, r.rhs);
  return model;
}

void export_mps(const MilpModel& model, const std::filesystem::path& path) {
  const std::string text = to_mps(model);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path.string());
}

MilpModel import_mps(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_mps(buf.str());
}

std::vector<std::uint8_t> import_solution(const MilpModel& model, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot open " + path.string());
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < model.num_variables(); ++j) index.emplace(model.variables()[j].name, j);

  std::vector<std::uint8_t> x(model.num_variables(), 0);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = split(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok.size() != 2) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected 'name value'");
    }
    const auto it = index.find(tok[0]);
    if (it == index.end()) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": unknown variable " + tok[0]);
    }
    const double v = parse_number(tok[1], line_no);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-6 || (r != 0.0 && r != 1.0)) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": value of " + tok[0] +
                                             " is not binary");
    }
    x[it->second] = r == 1.0 ? 1 : 0;
  }
  return x;
}

}  // namespace lasercon::milp
