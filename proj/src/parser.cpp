#include <set>
#include <sstream>

#include "moot/parser.hpp"

namespace moot {

bool is_builtin_type_name(std::string_view name) {
  return name == "int" || name == "char" || name == "bool" || name == "void" || name == "any";
}

const Span& span_of(const Declaration& decl) {
  return std::visit([](const auto& d) -> const Span& { return d.span; }, decl);
}

namespace {

class Parser {
 public:
  explicit Parser(std::shared_ptr<SourceFile> source) : source_(std::move(source)) {
    for (const char* name : {"int", "char", "bool", "void", "any"}) type_names_.insert(name);
  }

  SurfaceProgram run() {
    SurfaceProgram program;
    while (!at_end()) program.declarations.push_back(declaration());
    program.sources.push_back(source_);
    return program;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t index = std::min(pos_ + ahead, tokens().size() - 1);
    return tokens()[index];
  }
  const std::vector<Token>& tokens() const { return source_->tokens; }
  bool at_end() const { return peek().kind == TokenKind::End; }

  Span span_at(const Token& token) const { return Span{source_->name, token.line, token.column}; }
  Span here() const { return span_at(peek()); }

  bool check(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind != TokenKind::End && t.kind != TokenKind::StringLiteral &&
           t.kind != TokenKind::CharLiteral && t.text == text;
  }

  bool accept(std::string_view text) {
    if (!check(text)) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void expected(std::string_view what) const {
    std::string found = at_end() ? std::string("end of input") : "'" + peek().text + "'";
    fail(Stage::Parse, here(), "expected " + std::string(what) + ", found " + found);
  }

  const Token& expect(std::string_view text) {
    if (!check(text)) expected("'" + std::string(text) + "'");
    return tokens()[pos_++];
  }

  const Token& identifier(std::string_view what = "identifier") {
    if (peek().kind != TokenKind::Identifier) expected(what);
    return tokens()[pos_++];
  }

  bool starts_type(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    if (t.kind == TokenKind::Keyword && t.text == "struct") return true;
    return t.kind == TokenKind::Identifier && type_names_.count(t.text) > 0;
  }

  // typespec ['+'] ; declarator stars are parsed by the caller.
  TypeRef type_spec() {
    TypeRef type;
    type.span = here();
    type.spec.file = source_.get();
    type.spec.begin = pos_;
    if (accept("struct")) {
      type.struct_tag = true;
      type.base = identifier("struct tag").text;
    } else {
      if (!starts_type()) expected("type name");
      type.base = tokens()[pos_++].text;
    }
    if (accept("+")) type.strengthenable = true;
    type.spec.end = pos_;
    return type;
  }

  int stars() {
    int depth = 0;
    while (accept("*")) ++depth;
    return depth;
  }

  TypeRef full_type() {
    TypeRef type = type_spec();
    type.pointer_depth = stars();
    return type;
  }

  Declaration declaration() {
    const Token& first = peek();
    if (first.kind == TokenKind::Keyword && first.text == "protocoltype") {
      ++pos_;
      ProtocolTypeDecl decl{identifier("protocol type name").text, span_at(first)};
      expect(";");
      type_names_.insert(decl.name);
      return decl;
    }
    if (first.kind == TokenKind::Keyword && first.text == "parametertype") {
      ++pos_;
      ParameterTypeDecl decl;
      decl.span = span_at(first);
      decl.name = identifier("parameter type name").text;
      if (accept(":")) {
        do {
          decl.bounds.push_back(identifier("protocol type name").text);
        } while (accept(","));
      }
      expect(";");
      type_names_.insert(decl.name);
      return decl;
    }
    if (first.kind == TokenKind::Keyword && first.text == "struct" && check("{", 2)) {
      return struct_decl();
    }
    if (first.kind == TokenKind::Keyword && first.text == "typedef") return typedef_decl();
    if (check("<")) return directive();
    return function_decl();
  }

  StructDecl struct_decl() {
    StructDecl decl;
    decl.span = here();
    expect("struct");
    decl.tag = identifier("struct tag").text;
    expect("{");
    while (!accept("}")) {
      if (at_end()) expected("'}'");
      TypeRef base = type_spec();
      do {
        FieldDecl field;
        field.type = base;
        field.type.pointer_depth = stars();
        field.span = here();
        field.name = identifier("field name").text;
        decl.fields.push_back(std::move(field));
      } while (accept(","));
      expect(";");
    }
    expect(";");
    return decl;
  }

  Declaration typedef_decl() {
    Span span = here();
    expect("typedef");
    if (peek().kind == TokenKind::Identifier && check("<", 1)) {
      ParamTypedefDecl decl;
      decl.span = span;
      decl.generic = identifier().text;
      expect("<");
      while (!accept(">")) {
        Substitution sub;
        sub.concrete = identifier("concrete type name").text;
        sub.parameter = identifier("parameter type name").text;
        decl.substitutions.push_back(std::move(sub));
        accept(",");
        if (at_end()) expected("'>'");
      }
      decl.name = identifier("typedef name").text;
      expect(";");
      type_names_.insert(decl.name);
      return decl;
    }
    TypedefDecl decl;
    decl.span = span;
    decl.target = full_type();
    decl.name = identifier("typedef name").text;
    expect(";");
    type_names_.insert(decl.name);
    return decl;
  }

  Declaration directive() {
    Span span = here();
    expect("<");
    const Token& word = identifier("'check' or 'distinct'");
    if (word.text == "check") {
      CheckDirective decl;
      decl.span = span;
      decl.strong = full_type();
      if (identifier("'subsumed'").text != "subsumed") expected("'subsumed'");
      if (identifier("'by'").text != "by") expected("'by'");
      decl.weak = full_type();
      expect(">");
      return decl;
    }
    if (word.text == "distinct") {
      DistinctDirective decl;
      decl.span = span;
      do {
        decl.types.push_back(full_type());
        accept(",");
      } while (!check(">") && !at_end());
      expect(">");
      if (decl.types.size() < 2) fail(Stage::Parse, span, "distinct needs at least two types");
      return decl;
    }
    fail(Stage::Parse, span_at(word), "unknown directive '" + word.text + "'");
  }

  FunctionDecl function_decl() {
    FunctionDecl decl;
    decl.span = here();
    decl.tokens.file = source_.get();
    decl.tokens.begin = pos_;
    decl.ret = full_type();
    decl.name_token = pos_;
    decl.name = identifier("function name").text;
    expect("(");
    if (check("void") && check(")", 1)) ++pos_;
    if (!check(")")) {
      do {
        ParamDecl param;
        param.span = here();
        param.type = full_type();
        if (accept("&")) param.type.reference = true;
        if (peek().kind == TokenKind::Identifier) param.name = tokens()[pos_++].text;
        decl.params.push_back(std::move(param));
      } while (accept(","));
    }
    expect(")");
    if (!accept(";")) {
      if (!check("{")) expected("';' or function body");
      decl.body = block();
    }
    decl.tokens.end = pos_;
    return decl;
  }

  // ---- statements ----

  StmtPtr block() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = Stmt::Kind::Block;
    stmt->span = here();
    expect("{");
    while (!accept("}")) {
      if (at_end()) expected("'}'");
      stmt->block.push_back(statement());
    }
    return stmt;
  }

  bool starts_declaration() const {
    if (!starts_type()) return false;
    if (peek().kind == TokenKind::Keyword) return true;  // struct
    const Token& next = peek(1);
    return next.kind == TokenKind::Identifier || next.text == "*" || next.text == "+";
  }

  StmtPtr declaration_statement() {
    auto stmt = std::make_unique<Stmt>();
    stmt->kind = Stmt::Kind::Decl;
    stmt->span = here();
    stmt->decl_type = type_spec();
    do {
      Declarator d;
      d.extra_pointer_depth = stars();
      if (accept("&")) d.reference = true;
      d.span = here();
      d.name = identifier("variable name").text;
      if (accept("=")) d.init = assignment();
      stmt->declarators.push_back(std::move(d));
    } while (accept(","));
    expect(";");
    return stmt;
  }

  StmtPtr statement() {
    if (check("{")) return block();
    auto stmt = std::make_unique<Stmt>();
    stmt->span = here();
    if (accept(";")) {
      stmt->kind = Stmt::Kind::Empty;
      return stmt;
    }
    if (accept("if")) {
      stmt->kind = Stmt::Kind::If;
      expect("(");
      stmt->expr = expression();
      expect(")");
      stmt->then_branch = statement();
      if (accept("else")) stmt->else_branch = statement();
      return stmt;
    }
    if (accept("while")) {
      stmt->kind = Stmt::Kind::While;
      expect("(");
      stmt->expr = expression();
      expect(")");
      stmt->then_branch = statement();
      return stmt;
    }
    if (accept("for")) {
      stmt->kind = Stmt::Kind::For;
      expect("(");
      if (starts_declaration()) {
        stmt->for_init = declaration_statement();
      } else {
        auto init = std::make_unique<Stmt>();
        init->span = here();
        if (!check(";")) {
          init->kind = Stmt::Kind::ExprStmt;
          init->expr = expression();
        }
        expect(";");
        stmt->for_init = std::move(init);
      }
      if (!check(";")) stmt->expr = expression();
      expect(";");
      if (!check(")")) stmt->for_step = expression();
      expect(")");
      stmt->then_branch = statement();
      return stmt;
    }
    if (accept("return")) {
      stmt->kind = Stmt::Kind::Return;
      if (!check(";")) stmt->expr = expression();
      expect(";");
      return stmt;
    }
    if (starts_declaration()) return declaration_statement();
    stmt->kind = Stmt::Kind::ExprStmt;
    stmt->expr = expression();
    expect(";");
    return stmt;
  }

  // ---- expressions ----

  ExprPtr make(Expr::Kind kind, const Token& at, std::string text = {}) {
    auto e = std::make_unique<Expr>();
    e->kind = kind;
    e->text = std::move(text);
    e->span = span_at(at);
    e->file = source_.get();
    e->token = static_cast<std::size_t>(&at - tokens().data());
    return e;
  }

  ExprPtr expression() { return assignment(); }

  ExprPtr assignment() {
    ExprPtr lhs = conditional();
    const Token& op = peek();
    if (check("=") || check("+=") || check("-=")) {
      ++pos_;
      auto e = make(op.text == "=" ? Expr::Kind::Assign : Expr::Kind::CompoundAssign, op, op.text);
      e->operands.push_back(std::move(lhs));
      e->operands.push_back(assignment());
      return e;
    }
    return lhs;
  }

  ExprPtr conditional() {
    ExprPtr cond = binary(0);
    if (!check("?")) return cond;
    const Token& q = tokens()[pos_++];
    auto e = make(Expr::Kind::Conditional, q, "?:");
    e->operands.push_back(std::move(cond));
    e->operands.push_back(expression());
    expect(":");
    e->operands.push_back(conditional());
    return e;
  }

  static int precedence(std::string_view op) {
    if (op == "||") return 1;
    if (op == "&&") return 2;
    if (op == "==" || op == "!=") return 3;
    if (op == "<" || op == ">" || op == "<=" || op == ">=") return 4;
    if (op == "+" || op == "-") return 5;
    if (op == "*" || op == "/" || op == "%") return 6;
    return 0;
  }

  ExprPtr binary(int min_precedence) {
    ExprPtr lhs = unary();
    while (true) {
      const Token& op = peek();
      if (op.kind != TokenKind::Punct) break;
      int prec = precedence(op.text);
      if (prec == 0 || prec <= min_precedence) break;
      ++pos_;
      auto e = make(Expr::Kind::Binary, op, op.text);
      e->operands.push_back(std::move(lhs));
      e->operands.push_back(binary(prec));
      lhs = std::move(e);
    }
    return lhs;
  }

  ExprPtr unary() {
    const Token& op = peek();
    if (check("!") || check("-")) {
      ++pos_;
      auto e = make(Expr::Kind::Unary, op, op.text);
      e->operands.push_back(unary());
      return e;
    }
    if (check("++") || check("--")) {
      ++pos_;
      auto e = make(Expr::Kind::IncDec, op, op.text);
      e->operands.push_back(unary());
      return e;
    }
    if (check("*")) {
      ++pos_;
      auto e = make(Expr::Kind::Deref, op, "*");
      e->operands.push_back(unary());
      return e;
    }
    if (check("&")) {
      ++pos_;
      auto e = make(Expr::Kind::AddressOf, op, "&");
      e->operands.push_back(unary());
      return e;
    }
    if (check("[") && check("^", 1)) {
      ++pos_;
      auto e = make(Expr::Kind::WeakenCast, op, "[^]");
      expect("^");
      e->cast_type = full_type();
      expect("]");
      e->cast_end = pos_;
      e->operands.push_back(unary());
      return e;
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = primary();
    while (true) {
      const Token& op = peek();
      if (check("(")) {
        if (e->kind != Expr::Kind::Var) fail(Stage::Parse, span_at(op), "only named functions can be called");
        ++pos_;
        e->kind = Expr::Kind::Call;
        if (!check(")")) {
          do {
            e->operands.push_back(assignment());
          } while (accept(","));
        }
        expect(")");
      } else if (check(".") || check("->")) {
        ++pos_;
        auto field = make(op.text == "." ? Expr::Kind::Field : Expr::Kind::Arrow, op);
        field->text = identifier("field name").text;
        field->operands.push_back(std::move(e));
        e = std::move(field);
      } else if (check("++") || check("--")) {
        ++pos_;
        auto inc = make(Expr::Kind::IncDec, op, op.text);
        inc->postfix = true;
        inc->operands.push_back(std::move(e));
        e = std::move(inc);
      } else {
        break;
      }
    }
    return e;
  }

  ExprPtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Identifier:
        ++pos_;
        return make(Expr::Kind::Var, t, t.text);
      case TokenKind::IntLiteral:
        ++pos_;
        return make(Expr::Kind::IntLit, t, t.text);
      case TokenKind::CharLiteral:
        ++pos_;
        return make(Expr::Kind::CharLit, t, t.text);
      case TokenKind::StringLiteral:
        ++pos_;
        return make(Expr::Kind::StringLit, t, t.text);
      default:
        break;
    }
    if (accept("(")) {
      ExprPtr inner = expression();
      expect(")");
      return inner;
    }
    expected("expression");
  }

  std::shared_ptr<SourceFile> source_;
  std::size_t pos_ = 0;
  std::set<std::string> type_names_;
};

}  // namespace

SurfaceProgram parse(std::string text, std::string file) {
  auto source = std::make_shared<SourceFile>();
  source->name = std::move(file);
  source->text = std::move(text);
  source->tokens = lex(source->text, source->name);
  return Parser(source).run();
}

SurfaceProgram merge(std::vector<SurfaceProgram> parts) {
  SurfaceProgram merged;
  for (auto& part : parts) {
    for (auto& s : part.sources) merged.sources.push_back(std::move(s));
    for (auto& d : part.declarations) merged.declarations.push_back(std::move(d));
  }
  return merged;
}

std::string spell_type(const TypeRef& type) {
  std::string out = type.struct_tag ? "struct " + type.base : type.base;
  if (type.pointer_depth > 0) out += ' ' + std::string(type.pointer_depth, '*');
  return out;
}

namespace {

std::string source_slice(const TokenRange& range) {
  const auto& tokens = range.file->tokens;
  std::size_t begin = tokens[range.begin].offset;
  const Token& last = tokens[range.end - 1];
  return range.file->text.substr(begin, last.offset + last.text.size() - begin);
}

std::string spell_with_plus(const TypeRef& type) {
  std::string out = type.struct_tag ? "struct " + type.base : type.base;
  if (type.strengthenable) out += '+';
  return out;
}

std::string declarator(const TypeRef& type, const std::string& name) {
  std::string out = spell_with_plus(type) + ' ';
  out += std::string(type.pointer_depth, '*');
  if (type.reference) out += '&';
  return out + name;
}

}  // namespace

std::string print_program(const SurfaceProgram& program) {
  std::ostringstream out;
  for (const auto& decl : program.declarations) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, ProtocolTypeDecl>) {
            out << "protocoltype " << d.name << ";\n";
          } else if constexpr (std::is_same_v<T, ParameterTypeDecl>) {
            out << "parametertype " << d.name;
            for (std::size_t i = 0; i < d.bounds.size(); ++i)
              out << (i == 0 ? " : " : ", ") << d.bounds[i];
            out << ";\n";
          } else if constexpr (std::is_same_v<T, StructDecl>) {
            out << "struct " << d.tag << " {\n";
            for (const auto& f : d.fields) out << "  " << declarator(f.type, f.name) << ";\n";
            out << "};\n";
          } else if constexpr (std::is_same_v<T, TypedefDecl>) {
            out << "typedef " << declarator(d.target, d.name) << ";\n";
          } else if constexpr (std::is_same_v<T, ParamTypedefDecl>) {
            out << "typedef " << d.generic << "<";
            for (std::size_t i = 0; i < d.substitutions.size(); ++i)
              out << (i ? ", " : "") << d.substitutions[i].concrete << ' ' << d.substitutions[i].parameter;
            out << "> " << d.name << ";\n";
          } else if constexpr (std::is_same_v<T, FunctionDecl>) {
            if (d.tokens.valid()) {
              out << source_slice(d.tokens) << "\n";
            } else {
              out << declarator(d.ret, d.name) << "(";
              for (std::size_t i = 0; i < d.params.size(); ++i)
                out << (i ? ", " : " ") << declarator(d.params[i].type, d.params[i].name);
              out << " );\n";
            }
          } else if constexpr (std::is_same_v<T, CheckDirective>) {
            out << "<check " << spell_with_plus(d.strong) << std::string(d.strong.pointer_depth, '*')
                << " subsumed by " << spell_with_plus(d.weak) << std::string(d.weak.pointer_depth, '*')
                << ">\n";
          } else if constexpr (std::is_same_v<T, DistinctDirective>) {
            out << "<distinct";
            for (const auto& t : d.types) out << ' ' << spell_with_plus(t) << std::string(t.pointer_depth, '*');
            out << ">\n";
          }
        },
        decl);
  }
  return out.str();
}

}  // namespace moot
