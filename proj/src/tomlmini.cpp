#include "cvop/tomlmini.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace cvop::toml {

double Value::number() const {
    if (!is_number()) throw ParseError("expected a number", line);
    return std::get<double>(v_);
}
bool Value::boolean() const {
    if (!is_bool()) throw ParseError("expected a boolean", line);
    return std::get<bool>(v_);
}
const std::string& Value::string() const {
    if (!is_string()) throw ParseError("expected a string", line);
    return std::get<std::string>(v_);
}
const Value::Array& Value::array() const {
    if (!is_array()) throw ParseError("expected an array", line);
    return std::get<Array>(v_);
}
const Value::Table& Value::table() const {
    if (!is_table()) throw ParseError("expected a table", line);
    return std::get<Table>(v_);
}
Value::Table& Value::table() {
    if (!is_table()) throw ParseError("expected a table", line);
    return std::get<Table>(v_);
}
Value::Array& Value::array() {
    if (!is_array()) throw ParseError("expected an array", line);
    return std::get<Array>(v_);
}

const Value* Value::find(const std::string& key) const {
    if (!is_table()) return nullptr;
    auto it = table().find(key);
    return it == table().end() ? nullptr : &it->second;
}

namespace {

class Parser {
  public:
    explicit Parser(const std::string& text) : s_(text) {}

    Value parse_document() {
        Value root{Value::Table{}};
        root.line = 1;
        Value* current = &root;
        for (;;) {
            skip_blank(true);
            if (eof()) break;
            if (peek() == '[') {
                current = parse_header(root);
            } else {
                parse_key_value(*current);
            }
        }
        return root;
    }

  private:
    const std::string& s_;
    size_t pos_ = 0;
    int line_ = 1;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    char get() {
        char c = s_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_); }

    // Skip spaces and comments; also newlines when crossing lines is allowed.
    void skip_blank(bool cross_lines) {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r') {
                get();
            } else if (c == '#') {
                while (!eof() && peek() != '\n') get();
            } else if (c == '\n' && cross_lines) {
                get();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        get();
    }

    static bool is_bare(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    std::string parse_bare_key() {
        std::string k;
        while (!eof() && is_bare(peek())) k.push_back(get());
        if (k.empty()) fail("expected a key");
        return k;
    }

    std::vector<std::string> parse_dotted_key() {
        std::vector<std::string> parts{parse_bare_key()};
        skip_blank(false);
        while (!eof() && peek() == '.') {
            get();
            skip_blank(false);
            parts.push_back(parse_bare_key());
            skip_blank(false);
        }
        return parts;
    }

    Value* descend(Value& root, const std::vector<std::string>& parts, size_t upto) {
        Value* cur = &root;
        for (size_t i = 0; i < upto; ++i) {
            auto& tbl = cur->table();
            auto it = tbl.find(parts[i]);
            if (it == tbl.end()) {
                Value v{Value::Table{}};
                v.line = line_;
                it = tbl.emplace(parts[i], std::move(v)).first;
            }
            Value* next = &it->second;
            if (next->is_array()) {
                if (next->array().empty()) fail("empty table array for key '" + parts[i] + "'");
                next = &next->array().back();
            }
            if (!next->is_table()) fail("key '" + parts[i] + "' is not a table");
            cur = next;
        }
        return cur;
    }

    Value* parse_header(Value& root) {
        expect('[');
        bool array_of_tables = !eof() && peek() == '[';
        if (array_of_tables) get();
        skip_blank(false);
        auto parts = parse_dotted_key();
        skip_blank(false);
        expect(']');
        if (array_of_tables) expect(']');
        Value* parent = descend(root, parts, parts.size() - 1);
        auto& tbl = parent->table();
        const std::string& name = parts.back();
        if (array_of_tables) {
            auto it = tbl.find(name);
            if (it == tbl.end()) {
                Value arr{Value::Array{}};
                arr.line = line_;
                it = tbl.emplace(name, std::move(arr)).first;
            }
            if (!it->second.is_array()) fail("key '" + name + "' is not a table array");
            Value elem{Value::Table{}};
            elem.line = line_;
            it->second.array().push_back(std::move(elem));
            return &it->second.array().back();
        }
        auto it = tbl.find(name);
        if (it == tbl.end()) {
            Value v{Value::Table{}};
            v.line = line_;
            it = tbl.emplace(name, std::move(v)).first;
        }
        if (!it->second.is_table()) fail("duplicate key '" + name + "'");
        return &it->second;
    }

    void parse_key_value(Value& into) {
        auto parts = parse_dotted_key();
        skip_blank(false);
        expect('=');
        skip_blank(false);
        Value v = parse_value();
        Value* parent = descend(into, parts, parts.size() - 1);
        auto& tbl = parent->table();
        if (tbl.count(parts.back())) fail("duplicate key '" + parts.back() + "'");
        tbl.emplace(parts.back(), std::move(v));
        skip_blank(false);
        if (!eof() && peek() != '\n') fail("unexpected trailing content after value");
    }

    Value parse_value() {
        if (eof()) fail("expected a value");
        int at = line_;
        char c = peek();
        Value v;
        if (c == '"') {
            v = Value{parse_string()};
        } else if (c == '[') {
            v = parse_array();
        } else if (c == '{') {
            v = parse_inline_table();
        } else if (is_bare(c) || c == '+' || c == '-' || c == '.') {
            v = parse_scalar();
        } else {
            fail("unexpected character in value");
        }
        v.line = at;
        return v;
    }

    std::string parse_string() {
        expect('"');
        std::string out;
        while (!eof() && peek() != '"') {
            char c = get();
            if (c == '\n') fail("unterminated string");
            if (c == '\\') {
                if (eof()) fail("unterminated escape");
                char e = get();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail("unsupported escape sequence");
                }
            } else {
                out.push_back(c);
            }
        }
        expect('"');
        return out;
    }

    Value parse_array() {
        expect('[');
        Value::Array arr;
        for (;;) {
            skip_blank(true);
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                get();
                break;
            }
            arr.push_back(parse_value());
            skip_blank(true);
            if (!eof() && peek() == ',') {
                get();
            } else if (!eof() && peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        return Value{std::move(arr)};
    }

    Value parse_inline_table() {
        expect('{');
        Value::Table tbl;
        for (;;) {
            skip_blank(true);
            if (eof()) fail("unterminated inline table");
            if (peek() == '}') {
                get();
                break;
            }
            std::string key = parse_bare_key();
            skip_blank(false);
            expect('=');
            skip_blank(false);
            Value v = parse_value();
            if (tbl.count(key)) fail("duplicate key '" + key + "'");
            tbl.emplace(std::move(key), std::move(v));
            skip_blank(true);
            if (!eof() && peek() == ',') {
                get();
            } else if (!eof() && peek() != '}') {
                fail("expected ',' or '}' in inline table");
            }
        }
        return Value{std::move(tbl)};
    }

    Value parse_scalar() {
        std::string tok;
        while (!eof() && (is_bare(peek()) || peek() == '+' || peek() == '.')) tok.push_back(get());
        if (tok == "true") return Value{true};
        if (tok == "false") return Value{false};
        if (tok == "inf" || tok == "+inf") return Value{HUGE_VAL};
        if (tok == "-inf") return Value{-HUGE_VAL};
        std::string digits;
        for (char c : tok)
            if (c != '_') digits.push_back(c);
        char* end = nullptr;
        double d = std::strtod(digits.c_str(), &end);
        if (end == digits.c_str() || *end != '\0') fail("invalid literal '" + tok + "'");
        return Value{d};
    }
};

}  // namespace

Value parse(const std::string& text) { return Parser(text).parse_document(); }

}  // namespace cvop::toml
