#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tornado/milp.hpp"

namespace tornado::milp {

LpFormatError::LpFormatError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool name_char(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return true;
  static constexpr std::string_view extra = "!\"#$%&()/,.;?@_`'{}|~";
  return extra.find(c) != std::string_view::npos;
}

std::string number(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_terms(std::ostream& os, const Model& model, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    const double mag = std::abs(t.coef);
    if (first) os << (t.coef < 0 ? " - " : " ");
    else os << (t.coef < 0 ? " - " : " + ");
    os << number(mag) << ' ' << model.variables()[t.var].name;
    first = false;
  }
}

}  // namespace

std::optional<std::string> check_name(const std::string& name) {
  if (name.empty()) return "empty name";
  if (name.size() > 255) return "name longer than 255 characters";
  if (std::isdigit(static_cast<unsigned char>(name.front())) || name.front() == '.') {
    return "name \"" + name + "\" starts with a digit or period";
  }
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c))) return "name \"" + name + "\" contains whitespace";
    if (!name_char(c)) return "name \"" + name + "\" contains '" + std::string(1, c) + "'";
  }
  const auto l = lower(name);
  if (l == "inf" || l == "infinity" || l == "free") return "name \"" + name + "\" is reserved";
  return std::nullopt;
}

std::string write_lp(const Model& model) {
  model.validate();
  for (const auto& v : model.variables()) {
    if (auto err = check_name(v.name)) throw std::invalid_argument("variable: " + *err);
  }
  for (const auto& r : model.constraints()) {
    if (r.name.empty()) continue;
    if (auto err = check_name(r.name)) throw std::invalid_argument("constraint: " + *err);
  }

  std::ostringstream os;
  os << (model.sense() == ObjSense::maximize ? "Maximize\n" : "Minimize\n");
  os << " obj:";
  write_terms(os, model, model.objective());
  if (model.objective_constant() != 0.0) {
    os << (model.objective_constant() < 0 ? " - " : " + ") << number(std::abs(model.objective_constant()));
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.num_rows(); ++i) {
    const auto& r = model.constraints()[i];
    os << ' ' << (r.name.empty() ? "c" + std::to_string(i) : r.name) << ':';
    write_terms(os, model, r.terms);
    switch (r.sense) {
      case RowSense::le: os << " <= "; break;
      case RowSense::ge: os << " >= "; break;
      case RowSense::eq: os << " = "; break;
    }
    os << number(r.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.kind == VarKind::binary) continue;
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << ' ' << v.name << " free\n";
    } else if (v.lower == v.upper) {
      os << ' ' << v.name << " = " << number(v.lower) << '\n';
    } else if (std::isinf(v.upper)) {
      os << ' ' << v.name << " >= " << number(v.lower) << '\n';
    } else {
      os << ' ' << number(v.lower) << " <= " << v.name << " <= " << number(v.upper) << '\n';
    }
  }
  bool header = false;
  for (const auto& v : model.variables()) {
    if (v.kind != VarKind::binary) continue;
    if (!header) os << "Binaries\n";
    header = true;
    os << ' ' << v.name << '\n';
  }
  header = false;
  for (const auto& v : model.variables()) {
    if (v.kind != VarKind::integer) continue;
    if (!header) os << "Generals\n";
    header = true;
    os << ' ' << v.name << '\n';
  }
  os << "End\n";
  return os.str();
}

void export_lp(const Model& model, const std::filesystem::path& path) {
  const std::string text = write_lp(model);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

namespace {

enum class Tok { ident, number, op, colon, sign, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  double value = 0.0;
  std::size_t line = 0;
  std::size_t col = 0;
};

enum class Section { none, objective, constraints, bounds, binaries, generals, end };

std::optional<Section> section_header(const std::string& line, ObjSense& sense) {
  std::string key;
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (key == "minimize" || key == "minimise" || key == "minimum" || key == "min") {
    sense = ObjSense::minimize;
    return Section::objective;
  }
  if (key == "maximize" || key == "maximise" || key == "maximum" || key == "max") {
    sense = ObjSense::maximize;
    return Section::objective;
  }
  if (key == "subjectto" || key == "suchthat" || key == "st" || key == "s.t.") return Section::constraints;
  if (key == "bounds" || key == "bound") return Section::bounds;
  if (key == "binaries" || key == "binary" || key == "bin") return Section::binaries;
  if (key == "generals" || key == "general" || key == "gen" || key == "integers") return Section::generals;
  if (key == "end") return Section::end;
  return std::nullopt;
}

void tokenize_line(const std::string& line, std::size_t line_no, std::vector<Token>& out) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const std::size_t col = i + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '\\') break;
    if (c == '+' || c == '-') {
      out.push_back({Tok::sign, std::string(1, c), 0.0, line_no, col});
      ++i;
      continue;
    }
    if (c == ':') {
      out.push_back({Tok::colon, ":", 0.0, line_no, col});
      ++i;
      continue;
    }
    if (c == '<' || c == '>' || c == '=') {
      const std::string two = line.substr(i, 2);
      std::string op;
      std::size_t len = 2;
      if (two == "<=" || two == "=<") op = "<=";
      else if (two == ">=" || two == "=>") op = ">=";
      else {
        len = 1;
        op = c == '<' ? "<=" : c == '>' ? ">=" : "=";
      }
      out.push_back({Tok::op, op, 0.0, line_no, col});
      i += len;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double v = 0.0;
      const auto r = std::from_chars(line.data() + i, line.data() + line.size(), v);
      if (r.ec != std::errc{}) throw LpFormatError(line_no, col, "malformed number");
      const std::size_t len = static_cast<std::size_t>(r.ptr - (line.data() + i));
      out.push_back({Tok::number, line.substr(i, len), v, line_no, col});
      i += len;
      continue;
    }
    if (name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && name_char(line[j])) ++j;
      std::string word = line.substr(i, j - i);
      const auto l = lower(word);
      if (l == "inf" || l == "infinity") {
        out.push_back({Tok::number, word, kInf, line_no, col});
      } else {
        out.push_back({Tok::ident, std::move(word), 0.0, line_no, col});
      }
      i = j;
      continue;
    }
    throw LpFormatError(line_no, col, std::string("unexpected character '") + c + "'");
  }
}

class Parser {
 public:
  Model run(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    Section section = Section::none;
    std::vector<Token> pending;
    std::size_t last_line = 0;
    while (std::getline(in, line)) {
      ++line_no;
      last_line = line_no;
      ObjSense sense = ObjSense::minimize;
      if (auto s = section_header(line, sense)) {
        flush(section, pending);
        section = *s;
        if (section == Section::objective) {
          if (seen_objective_) throw LpFormatError(line_no, 1, "second objective section");
          seen_objective_ = true;
          sense_ = sense;
        }
        if (section == Section::end) break;
        continue;
      }
      std::vector<Token> toks;
      tokenize_line(line, line_no, toks);
      if (toks.empty()) continue;
      switch (section) {
        case Section::none:
          throw LpFormatError(line_no, toks.front().col, "content before the objective section");
        case Section::objective:
        case Section::constraints:
          pending.insert(pending.end(), toks.begin(), toks.end());
          if (section == Section::constraints) drain_constraints(pending);
          break;
        case Section::bounds: parse_bound(toks); break;
        case Section::binaries:
        case Section::generals:
          for (const auto& t : toks) {
            if (t.kind != Tok::ident) throw LpFormatError(t.line, t.col, "expected a variable name");
            const auto j = var(t.text);
            if (section == Section::binaries) {
              model_.variable(j).kind = VarKind::binary;
              model_.variable(j).lower = std::max(model_.variable(j).lower, 0.0);
              model_.variable(j).upper = std::min(model_.variable(j).upper, 1.0);
            } else {
              model_.variable(j).kind = VarKind::integer;
            }
          }
          break;
        case Section::end: break;
      }
    }
    flush(section, pending);
    if (!seen_objective_) throw LpFormatError(last_line + 1, 1, "missing objective section");
    model_.set_objective(sense_, std::move(obj_terms_), obj_const_);
    return std::move(model_);
  }

 private:
  std::size_t var(const std::string& name) {
    if (auto j = model_.find(name)) return *j;
    return model_.add_variable(name, VarKind::continuous, 0.0, kInf);
  }

  // Linear expression starting at toks[pos]; stops at an operator or the end.
  // Returns the constant part.
  double expression(const std::vector<Token>& toks, std::size_t& pos, std::vector<Term>& terms) {
    double constant = 0.0;
    while (pos < toks.size() && toks[pos].kind != Tok::op) {
      double s = 1.0;
      bool had_sign = false;
      while (pos < toks.size() && toks[pos].kind == Tok::sign) {
        if (toks[pos].text == "-") s = -s;
        had_sign = true;
        ++pos;
      }
      if (pos >= toks.size()) {
        const auto& t = toks.back();
        throw LpFormatError(t.line, t.col + 1, "expression ends after a sign");
      }
      const Token& t = toks[pos];
      if (!had_sign && !terms.empty()) {
        if (t.kind == Tok::number || t.kind == Tok::ident) throw LpFormatError(t.line, t.col, "missing '+' or '-' between terms");
      }
      if (t.kind == Tok::number) {
        ++pos;
        if (pos < toks.size() && toks[pos].kind == Tok::ident) {
          terms.push_back({var(toks[pos].text), s * t.value});
          ++pos;
        } else {
          constant += s * t.value;
        }
      } else if (t.kind == Tok::ident) {
        terms.push_back({var(t.text), s});
        ++pos;
      } else {
        throw LpFormatError(t.line, t.col, "expected a coefficient or variable, got '" + t.text + "'");
      }
    }
    return constant;
  }

  std::string label(const std::vector<Token>& toks, std::size_t& pos) {
    if (pos + 1 < toks.size() && toks[pos].kind == Tok::ident && toks[pos + 1].kind == Tok::colon) {
      std::string name = toks[pos].text;
      pos += 2;
      return name;
    }
    return {};
  }

  void flush(Section section, std::vector<Token>& pending) {
    if (pending.empty()) return;
    if (section == Section::objective) {
      std::size_t pos = 0;
      label(pending, pos);
      obj_const_ += expression(pending, pos, obj_terms_);
      if (pos < pending.size()) throw LpFormatError(pending[pos].line, pending[pos].col, "operator in objective");
    } else if (section == Section::constraints) {
      const auto& t = pending.front();
      throw LpFormatError(t.line, t.col, "incomplete constraint");
    }
    pending.clear();
  }

  // Consumes every complete constraint (expression, operator, rhs) in `toks`.
  void drain_constraints(std::vector<Token>& toks) {
    while (true) {
      auto op = std::find_if(toks.begin(), toks.end(), [](const Token& t) { return t.kind == Tok::op; });
      if (op == toks.end()) return;
      std::size_t k = static_cast<std::size_t>(op - toks.begin()) + 1;
      double s = 1.0;
      while (k < toks.size() && toks[k].kind == Tok::sign) {
        if (toks[k].text == "-") s = -s;
        ++k;
      }
      if (k >= toks.size()) return;  // rhs on a later line
      if (toks[k].kind != Tok::number) throw LpFormatError(toks[k].line, toks[k].col, "expected a right-hand side number");
      const double rhs = s * toks[k].value;
      std::vector<Token> head(toks.begin(), op);
      std::size_t pos = 0;
      std::string name = label(head, pos);
      std::vector<Term> terms;
      const double constant = expression(head, pos, terms);
      RowSense sense = op->text == "<=" ? RowSense::le : op->text == ">=" ? RowSense::ge : RowSense::eq;
      if (name.empty()) name = "c" + std::to_string(model_.num_rows());
      model_.add_constraint(std::move(name), std::move(terms), sense, rhs - constant);
      toks.erase(toks.begin(), toks.begin() + static_cast<std::ptrdiff_t>(k + 1));
    }
  }

  static double signed_number(const std::vector<Token>& toks, std::size_t& pos) {
    double s = 1.0;
    while (pos < toks.size() && toks[pos].kind == Tok::sign) {
      if (toks[pos].text == "-") s = -s;
      ++pos;
    }
    if (pos >= toks.size() || toks[pos].kind != Tok::number) {
      const auto& t = pos < toks.size() ? toks[pos] : toks.back();
      throw LpFormatError(t.line, t.col, "expected a number");
    }
    return s * toks[pos++].value;
  }

  void parse_bound(const std::vector<Token>& toks) {
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) {
      const auto& t = pos < toks.size() ? toks[pos] : toks.back();
      throw LpFormatError(t.line, t.col, msg);
    };
    if (toks[0].kind == Tok::ident) {
      const auto j = var(toks[0].text);
      auto& v = model_.variable(j);
      pos = 1;
      if (pos < toks.size() && toks[pos].kind == Tok::ident && lower(toks[pos].text) == "free") {
        v.lower = -kInf;
        v.upper = kInf;
        ++pos;
      } else {
        if (pos >= toks.size() || toks[pos].kind != Tok::op) fail("expected an operator in bound");
        const std::string op = toks[pos++].text;
        const double val = signed_number(toks, pos);
        if (op == "<=") v.upper = val;
        else if (op == ">=") v.lower = val;
        else v.lower = v.upper = val;
      }
    } else {
      const double lo = signed_number(toks, pos);
      if (pos >= toks.size() || toks[pos].kind != Tok::op) fail("expected an operator in bound");
      const std::string op1 = toks[pos++].text;
      if (pos >= toks.size() || toks[pos].kind != Tok::ident) fail("expected a variable name in bound");
      auto& v = model_.variable(var(toks[pos++].text));
      if (op1 == "<=") v.lower = lo;
      else if (op1 == ">=") v.upper = lo;
      else v.lower = v.upper = lo;
      if (pos < toks.size()) {
        if (toks[pos].kind != Tok::op) fail("expected an operator in bound");
        const std::string op2 = toks[pos++].text;
        const double hi = signed_number(toks, pos);
        if (op2 == "<=") v.upper = hi;
        else if (op2 == ">=") v.lower = hi;
        else fail("'=' not allowed in a double bound");
      }
    }
    if (pos != toks.size()) fail("unexpected token '" + toks[pos].text + "' in bound");
  }

  Model model_;
  ObjSense sense_ = ObjSense::minimize;
  bool seen_objective_ = false;
  std::vector<Term> obj_terms_;
  double obj_const_ = 0.0;
};

}  // namespace

Model parse_lp(const std::string& text) {
  Parser p;
  return p.run(text);
}

Model import_lp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_lp(ss.str());
}

std::vector<double> Solution::to_vector(const Model& model) const {
  std::vector<double> x(model.num_vars(), 0.0);
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    auto it = values.find(model.variables()[j].name);
    if (it != values.end()) x[j] = it->second;
  }
  return x;
}

Solution parse_solution(const std::string& text) {
  Solution sol;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    if (line[b] == '#') {
      const auto eq = line.find('=', b);
      const auto key = lower(line.substr(b + 1, eq == std::string::npos ? std::string::npos : eq - b - 1));
      auto trimmed = [](std::string s) {
        const auto s0 = s.find_first_not_of(" \t\r");
        const auto s1 = s.find_last_not_of(" \t\r");
        return s0 == std::string::npos ? std::string{} : s.substr(s0, s1 - s0 + 1);
      };
      if (eq == std::string::npos) continue;
      const std::string k = trimmed(key);
      const std::string v = trimmed(line.substr(eq + 1));
      if (k == "objective value") {
        double val = 0.0;
        const auto r = std::from_chars(v.data(), v.data() + v.size(), val);
        if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) {
          throw LpFormatError(line_no, eq + 2, "malformed objective value");
        }
        sol.objective = val;
      } else if (k == "status") {
        sol.status = v;
      }
      continue;
    }
    std::istringstream ls(line);
    std::string name;
    std::string value;
    std::string extra;
    ls >> name >> value;
    if (value.empty()) throw LpFormatError(line_no, line.size() + 1, "expected \"name value\"");
    if (ls >> extra) throw LpFormatError(line_no, line.find(extra, b + name.size() + value.size()) + 1, "trailing text");
    double val = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), val);
    if (r.ec != std::errc{} || r.ptr != value.data() + value.size()) {
      throw LpFormatError(line_no, line.find(value, b + name.size()) + 1, "malformed value \"" + value + "\"");
    }
    sol.values[name] = val;
  }
  return sol;
}

Solution import_solution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_solution(ss.str());
}

std::string write_solution(const Model& model, std::span<const double> x, double objective) {
  std::ostringstream os;
  os << "# Status = optimal\n";
  os << "# Objective value = " << number(objective) << '\n';
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    os << model.variables()[j].name << ' ' << number(x[j]) << '\n';
  }
  return os.str();
}

std::string write_status_only(Status status) { return std::string("# Status = ") + to_string(status) + "\n"; }

}  // namespace tornado::milp
