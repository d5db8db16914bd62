#include <array>
#include <cctype>

#include "moot/parser.hpp"

namespace moot {
namespace {

constexpr std::array kKeywords = {
    "protocoltype", "parametertype", "struct", "typedef", "if", "else", "while", "for", "return",
};

// Longest match first.
constexpr std::array kPuncts = {
    "->", "++", "--", "+=", "-=", "<=", ">=", "==", "!=", "&&", "||",
    "(",  ")",  "{",  "}",  "[",  "]",  ";",  ",",  ".",  "+",  "-",
    "*",  "/",  "%",  "<",  ">",  "=",  "!",  "&",  "^",  "?",  ":",
};

bool is_keyword(std::string_view word) {
  for (const char* k : kKeywords)
    if (word == k) return true;
  return false;
}

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  int line = 1;
  int column = 1;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  auto error = [&](const std::string& message) {
    fail(Stage::Parse, Span{file, line, column}, message);
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (text.substr(i, 2) == "//") {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (text.substr(i, 2) == "/*") {
      std::size_t close = text.find("*/", i + 2);
      if (close == std::string_view::npos) error("unterminated comment");
      advance(close + 2 - i);
      continue;
    }

    Token token;
    token.offset = i;
    token.line = line;
    token.column = column;
    std::size_t length = 0;

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i + length < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i + length])) || text[i + length] == '_'))
        ++length;
      token.text = std::string(text.substr(i, length));
      token.kind = is_keyword(token.text) ? TokenKind::Keyword : TokenKind::Identifier;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i + length < text.size() && std::isdigit(static_cast<unsigned char>(text[i + length])))
        ++length;
      token.kind = TokenKind::IntLiteral;
      token.text = std::string(text.substr(i, length));
    } else if (c == '"' || c == '\'') {
      length = 1;
      while (true) {
        if (i + length >= text.size() || text[i + length] == '\n')
          error(c == '"' ? "unterminated string literal" : "unterminated character literal");
        if (text[i + length] == '\\') {
          length += 2;
          continue;
        }
        if (text[i + length] == c) break;
        ++length;
      }
      ++length;
      token.kind = c == '"' ? TokenKind::StringLiteral : TokenKind::CharLiteral;
      token.text = std::string(text.substr(i, length));
    } else {
      for (const char* p : kPuncts) {
        std::string_view punct(p);
        if (text.substr(i, punct.size()) == punct) {
          length = punct.size();
          break;
        }
      }
      if (length == 0) error(std::string("unexpected character '") + c + "'");
      token.kind = TokenKind::Punct;
      token.text = std::string(text.substr(i, length));
    }
    tokens.push_back(std::move(token));
    advance(length);
  }

  Token end;
  end.kind = TokenKind::End;
  end.offset = text.size();
  end.line = line;
  end.column = column;
  tokens.push_back(end);
  return tokens;
}

}  // namespace moot
