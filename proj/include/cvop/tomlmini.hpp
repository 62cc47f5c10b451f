#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "cvop/geometry.hpp"

namespace cvop::toml {

struct ParseError : Error {
    int line;
    ParseError(const std::string& msg, int line_)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

/// A TOML-subset value: numbers are kept as doubles, tables as ordered maps.
/// Supports the pieces the problem-file schema needs: bare/dotted keys,
/// [table] and [[array-of-table]] headers, strings, numbers (incl. inf),
/// booleans, nested arrays and inline tables, and # comments.
class Value {
  public:
    using Array = std::vector<Value>;
    using Table = std::map<std::string, Value>;

    Value() = default;
    explicit Value(double d) : v_(d) {}
    explicit Value(bool b) : v_(b) {}
    explicit Value(std::string s) : v_(std::move(s)) {}
    explicit Value(Array a) : v_(std::move(a)) {}
    explicit Value(Table t) : v_(std::move(t)) {}

    bool is_number() const { return std::holds_alternative<double>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_string() const { return std::holds_alternative<std::string>(v_); }
    bool is_array() const { return std::holds_alternative<Array>(v_); }
    bool is_table() const { return std::holds_alternative<Table>(v_); }

    double number() const;
    bool boolean() const;
    const std::string& string() const;
    const Array& array() const;
    const Table& table() const;
    Table& table();
    Array& array();

    const Value* find(const std::string& key) const;

    int line = 0;

  private:
    std::variant<std::monostate, double, bool, std::string, Array, Table> v_;
};

/// Parse a document into its root table.
Value parse(const std::string& text);

}  // namespace cvop::toml
