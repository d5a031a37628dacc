#include "psa/dsl.hpp"

#include <cctype>
#include <sstream>

namespace psa {

namespace {

struct Token {
  enum class Kind { Ident, Number, Question, Arrow, LBrace, RBrace, End } kind;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= s_.size()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = s_[pos_];
    if (c == '{') { advance(); t.kind = Token::Kind::LBrace; t.text = "{"; return t; }
    if (c == '}') { advance(); t.kind = Token::Kind::RBrace; t.text = "}"; return t; }
    if (c == '?') { advance(); t.kind = Token::Kind::Question; t.text = "?"; return t; }
    if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      advance(); advance();
      t.kind = Token::Kind::Arrow;
      t.text = "->";
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Number;
      while (pos_ < s_.size() &&
             (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
              s_[pos_] == '/'))
        t.text.push_back(take());
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Ident;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_'))
        t.text.push_back(take());
      return t;
    }
    t.kind = Token::Kind::End;
    t.text = std::string(1, c);
    t.line = -1;  // marks a lexical error for the parser
    advance();
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }
  char take() {
    char c = s_[pos_];
    advance();
    return c;
  }
  void advance() {
    if (s_[pos_] == '\n') { ++line_; col_ = 1; }
    else ++col_;
    ++pos_;
  }

  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) { shift(); }

  ParseResult run() {
    while (cur_.kind != Token::Kind::End) {
      if (cur_.kind != Token::Kind::Ident) {
        error("expected a top-level item (processing/wcet/thread/reactivity)");
        shift();
        continue;
      }
      if (cur_.text == "processing") parse_processing();
      else if (cur_.text == "wcet") parse_wcet();
      else if (cur_.text == "thread") parse_thread();
      else if (cur_.text == "reactivity") parse_reactivity();
      else {
        error("unknown item '" + cur_.text + "'");
        shift();
      }
    }
    finish();
    return std::move(res_);
  }

 private:
  void shift() { cur_ = lex_.next(); if (cur_.line < 0) { cur_.line = 1; error("unexpected character '" + cur_.text + "'"); } }

  void error(const std::string& msg) {
    res_.diagnostics.push_back({Diagnostic::Severity::Error, msg, cur_.line, cur_.col});
  }

  bool expect_ident(const std::string& kw) {
    if (cur_.kind == Token::Kind::Ident && cur_.text == kw) {
      shift();
      return true;
    }
    error("expected '" + kw + "'");
    return false;
  }

  std::string expect_name() {
    if (cur_.kind == Token::Kind::Ident) {
      std::string n = cur_.text;
      shift();
      return n;
    }
    error("expected a name");
    return "";
  }

  std::optional<Rational> expect_number() {
    if (cur_.kind == Token::Kind::Number) {
      auto q = rat_parse(cur_.text);
      if (!q) error("malformed number '" + cur_.text + "'");
      shift();
      return q;
    }
    error("expected a number");
    shift();
    return std::nullopt;
  }

  Quantity expect_quantity() {
    if (cur_.kind == Token::Kind::Question) {
      shift();
      return Quantity{};
    }
    auto q = expect_number();
    Quantity out;
    if (q) out.value = *q;
    return out;
  }

  long expect_int() {
    auto q = expect_number();
    if (q && q->get_den() == 1) return q->get_num().get_si();
    if (q) error("expected an integer");
    return 0;
  }

  void parse_processing() {
    shift();
    ProcessingSpec p;
    p.name = expect_name();
    if (!expect_brace()) return;
    while (cur_.kind == Token::Kind::Ident) {
      if (cur_.text == "period") {
        shift();
        if (auto q = expect_number()) p.period = *q;
      } else if (cur_.text == "in") {
        shift();
        while (cur_.kind == Token::Kind::Ident && !is_field(cur_.text))
          p.inputs.push_back(expect_name());
      } else if (cur_.text == "out") {
        shift();
        while (cur_.kind == Token::Kind::Ident && !is_field(cur_.text))
          p.outputs.push_back(expect_name());
      } else {
        error("unknown field '" + cur_.text + "' in processing");
        shift();
      }
    }
    close_brace();
    res_.spec.processings.push_back(std::move(p));
  }

  static bool is_field(const std::string& s) {
    return s == "period" || s == "in" || s == "out" || s == "offset" || s == "deadline" ||
           s == "maf" || s == "priority" || s == "run" || s == "path" || s == "bound" ||
           s == "when" || s == "mod" || s == "endpoint";
  }

  void parse_wcet() {
    shift();
    std::string name = expect_name();
    auto q = expect_number();
    if (q) wcets_.emplace_back(name, *q);
  }

  void parse_thread() {
    shift();
    ThreadSpec t;
    t.name = expect_name();
    if (!expect_brace()) return;
    while (cur_.kind == Token::Kind::Ident) {
      if (cur_.text == "period") { shift(); if (auto q = expect_number()) t.period = *q; }
      else if (cur_.text == "offset") { shift(); t.offset = expect_quantity(); }
      else if (cur_.text == "deadline") { shift(); t.deadline = expect_quantity(); }
      else if (cur_.text == "maf") { shift(); if (auto q = expect_number()) t.maf = *q; }
      else if (cur_.text == "priority") { shift(); t.priority = static_cast<int>(expect_int()); }
      else if (cur_.text == "run") {
        shift();
        Slot s;
        s.processing = expect_name();
        expect_ident("when");
        s.rest = expect_int();
        expect_ident("mod");
        s.modulus = expect_int();
        t.slots.push_back(std::move(s));
      } else {
        error("unknown field '" + cur_.text + "' in thread");
        shift();
      }
    }
    close_brace();
    res_.spec.threads.push_back(std::move(t));
  }

  void parse_reactivity() {
    shift();
    ReactivitySpec r;
    r.name = expect_name();
    if (!expect_brace()) return;
    while (cur_.kind == Token::Kind::Ident) {
      if (cur_.text == "path") {
        shift();
        std::vector<std::string> path;
        path.push_back(expect_name());
        while (cur_.kind == Token::Kind::Arrow) {
          shift();
          path.push_back(expect_name());
        }
        if (path.size() < 3) {
          error("path needs a bus input, at least one processing, and a bus output");
        } else {
          r.bus_in = path.front();
          r.bus_out = path.back();
          r.chain.assign(path.begin() + 1, path.end() - 1);
        }
      } else if (cur_.text == "bound") {
        shift();
        if (auto q = expect_number()) r.bound = *q;
      } else if (cur_.text == "endpoint") {
        shift();
        std::string e = expect_name();
        if (e == "completion") r.endpoint = ReactivityEndpoint::Completion;
        else if (e == "publication") r.endpoint = ReactivityEndpoint::Publication;
        else error("endpoint must be completion or publication");
      } else {
        error("unknown field '" + cur_.text + "' in reactivity");
        shift();
      }
    }
    close_brace();
    res_.spec.reactivities.push_back(std::move(r));
  }

  bool expect_brace() {
    if (cur_.kind == Token::Kind::LBrace) {
      shift();
      return true;
    }
    error("expected '{'");
    return false;
  }
  void close_brace() {
    if (cur_.kind == Token::Kind::RBrace) shift();
    else error("expected '}'");
  }

  void finish() {
    // attach wcets; duplicate names and unknown references become errors
    for (auto& [name, val] : wcets_) {
      bool found = false;
      for (auto& p : res_.spec.processings)
        if (p.name == name) {
          if (p.wcet.concrete())
            res_.diagnostics.push_back(
                {Diagnostic::Severity::Error, "duplicate wcet for " + name, 0, 0});
          p.wcet.value = val;
          found = true;
        }
      if (!found)
        res_.diagnostics.push_back(
            {Diagnostic::Severity::Error, "wcet for unknown processing " + name, 0, 0});
    }
    for (size_t i = 0; i < res_.spec.processings.size(); ++i)
      for (size_t j = i + 1; j < res_.spec.processings.size(); ++j)
        if (res_.spec.processings[i].name == res_.spec.processings[j].name)
          res_.diagnostics.push_back({Diagnostic::Severity::Error,
                                      "duplicate processing " + res_.spec.processings[i].name,
                                      0, 0});
    for (size_t i = 0; i < res_.spec.threads.size(); ++i)
      for (size_t j = i + 1; j < res_.spec.threads.size(); ++j)
        if (res_.spec.threads[i].name == res_.spec.threads[j].name)
          res_.diagnostics.push_back({Diagnostic::Severity::Error,
                                      "duplicate thread " + res_.spec.threads[i].name, 0, 0});
    for (const auto& p : res_.spec.processings)
      if (!p.wcet.concrete())
        res_.diagnostics.push_back({Diagnostic::Severity::Warning,
                                    "processing " + p.name + " has no wcet (left free)", 0, 0});
    if (!has_errors(res_.diagnostics)) {
      for (auto& d : validate(res_.spec)) res_.diagnostics.push_back(d);
    }
  }

  Lexer lex_;
  Token cur_;
  ParseResult res_;
  std::vector<std::pair<std::string, Rational>> wcets_;
};

}  // namespace

ParseResult parse(const std::string& text, const std::string&) {
  return Parser(text).run();
}

std::string serialize(const SystemSpec& spec) {
  std::ostringstream o;
  for (const auto& p : spec.processings) {
    o << "processing " << p.name << " {\n  period " << rat_str(p.period) << "\n";
    if (!p.inputs.empty()) {
      o << "  in";
      for (const auto& d : p.inputs) o << " " << d;
      o << "\n";
    }
    if (!p.outputs.empty()) {
      o << "  out";
      for (const auto& d : p.outputs) o << " " << d;
      o << "\n";
    }
    o << "}\n";
  }
  for (const auto& p : spec.processings)
    if (p.wcet.concrete()) o << "wcet " << p.name << " " << rat_str(*p.wcet.value) << "\n";
  for (const auto& t : spec.threads) {
    o << "thread " << t.name << " {\n";
    o << "  period " << rat_str(t.period) << "\n";
    o << "  offset " << (t.offset.concrete() ? rat_str(*t.offset.value) : "?") << "\n";
    o << "  deadline " << (t.deadline.concrete() ? rat_str(*t.deadline.value) : "?") << "\n";
    o << "  maf " << rat_str(t.maf) << "\n";
    o << "  priority " << t.priority << "\n";
    for (const auto& s : t.slots)
      o << "  run " << s.processing << " when " << s.rest << " mod " << s.modulus << "\n";
    o << "}\n";
  }
  for (const auto& r : spec.reactivities) {
    o << "reactivity " << r.name << " {\n  path " << r.bus_in;
    for (const auto& p : r.chain) o << " -> " << p;
    o << " -> " << r.bus_out << "\n  bound " << rat_str(r.bound) << "\n";
    if (r.endpoint == ReactivityEndpoint::Publication) o << "  endpoint publication\n";
    o << "}\n";
  }
  return o.str();
}

std::string format_diagnostic(const Diagnostic& d, const std::string& filename) {
  std::ostringstream o;
  o << filename << ":" << d.line << ":" << d.column << ": "
    << (d.severity == Diagnostic::Severity::Error ? "error" : "warning") << ": " << d.message;
  return o.str();
}

}  // namespace psa
