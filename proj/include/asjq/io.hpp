#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asjq/algorithms.hpp"
#include "asjq/core.hpp"
#include "asjq/join.hpp"

// Query DSL parsing / printing and CSV relation I/O.
//
// DSL (keywords case-insensitive, ';' between clauses optional):
//   RELATION <name> FROM <path>            (exactly two)
//   JOIN <ref> <EQ|LT|LE|GT|GE> <ref> [, ...]
//   AGG <name> = <SUM|AVG|MIN|MAX>(<ref>, <ref>) PREF <MIN|MAX>   (one or more)
//   LOCAL <ref> PREF <MIN|MAX>                                    (zero or more)
// where <ref> is <relName>.<column>; the first ref of a JOIN condition and
// of an AGG must belong to the first declared relation.

namespace asjq {

/// Syntax or semantic error in DSL text, with 1-based source position.
struct ParseError : std::runtime_error {
    int line, col;
    ParseError(int line_, int col_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ", col " +
                             std::to_string(col_) + ": " + msg),
          line(line_), col(col_) {}
};

/// CSV loading / writing failure (includes row/column positions where known).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QuerySpec parse_query(const std::string& text);  // throws ParseError

/// Canonical form; parse_query(print_query(s)) == s.
std::string print_query(const QuerySpec& spec);

/// Loads the schema's columns from a CSV file (header row first).  Fields
/// are decimal numbers or HH:MM times (stored as minutes).  Extra columns
/// in the file are ignored; missing ones are errors.  Throws IoError.
Relation load_relation(const std::string& path, const RelationSchema& schema);

struct LoadedQuery {
    QuerySpec spec;
    Relation left, right;
};

/// Parses a query file and loads both relations; relative data paths are
/// resolved against the query file's directory.
LoadedQuery load_query_file(const std::string& path);

/// Shortest decimal string that parses back to exactly this double.
std::string format_double(double v);

/// Result CSV: left_id, right_id, the local columns (left then right, as
/// "<rel>.<col>"), then each aggregate by its declared name.
void write_results(const std::string& path, std::span<const IdPair> result,
                   const CompiledQuery& q, const Relation& A, const Relation& B);

/// Companion run report: one "key,value" line per RunReport field.
void write_report(const std::string& path, const RunReport& report);

}  // namespace asjq
