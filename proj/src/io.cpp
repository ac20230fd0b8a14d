#include "asjq/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace asjq {

namespace {

// ------------------------------------------------------------------ lexer

struct Token {
    enum Kind { Ident, Punct, End } kind = End;
    std::string text;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    std::size_t pos = 0;
    int line = 1, col = 1;

    explicit Lexer(const std::string& s) : src(s) {}

    void advance(char c) {
        ++pos;
        if (c == '\n') { ++line; col = 1; } else ++col;
    }

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            advance(src[pos]);
    }

    Token next() {
        skip_ws();
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) return t;
        const char c = src[pos];
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Token::Ident;
            while (pos < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                t.text += src[pos];
                advance(src[pos]);
            }
            return t;
        }
        t.kind = Token::Punct;
        t.text = c;
        advance(c);
        return t;
    }

    /// Raw token for file paths: everything up to whitespace or ';'.
    Token next_raw() {
        skip_ws();
        Token t;
        t.line = line;
        t.col = col;
        if (pos >= src.size()) return t;
        t.kind = Token::Ident;
        while (pos < src.size() && !std::isspace(static_cast<unsigned char>(src[pos])) &&
               src[pos] != ';') {
            t.text += src[pos];
            advance(src[pos]);
        }
        return t;
    }
};

std::string upper(std::string s) {
    for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

// ----------------------------------------------------------------- parser

struct Parser {
    Lexer lex;
    Token cur;
    QuerySpec spec;

    explicit Parser(const std::string& text) : lex(text) { cur = lex.next(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur.line, cur.col, msg);
    }

    bool at_keyword(const char* kw) const {
        return cur.kind == Token::Ident && upper(cur.text) == kw;
    }

    void bump() { cur = lex.next(); }

    std::string expect_ident(const char* what) {
        if (cur.kind != Token::Ident) fail(std::string("expected ") + what);
        std::string s = cur.text;
        bump();
        return s;
    }

    void expect_punct(char c) {
        if (cur.kind != Token::Punct || cur.text[0] != c)
            fail(std::string("expected '") + c + "'");
        bump();
    }

    void expect_keyword(const char* kw) {
        if (!at_keyword(kw)) fail(std::string("expected keyword ") + kw);
        bump();
    }

    void skip_semis() {
        while (cur.kind == Token::Punct && cur.text[0] == ';') bump();
    }

    struct Ref { int side; std::string column; int line, col; };

    Ref parse_ref() {
        Ref r{.side = -1, .column = {}, .line = cur.line, .col = cur.col};
        const std::string rel = expect_ident("relation name");
        expect_punct('.');
        r.column = expect_ident("column name");
        if (rel == spec.left.name) r.side = 0;
        else if (rel == spec.right.name) r.side = 1;
        else throw ParseError(r.line, r.col, "unknown relation '" + rel + "'");
        return r;
    }

    RelationSchema& schema_of(int side) { return side == 0 ? spec.left : spec.right; }

    void add_column(const Ref& r, RoleKind kind, int slot, Pref pref) {
        RelationSchema& s = schema_of(r.side);
        if (s.column_index(r.column) >= 0)
            throw ParseError(r.line, r.col,
                             "column '" + s.name + "." + r.column +
                                 "' referenced in more than one clause");
        s.columns.push_back({r.column, kind, slot, pref});
    }

    Pref parse_minmax_pref() {
        if (at_keyword("MIN")) { bump(); return Pref::Min; }
        if (at_keyword("MAX")) { bump(); return Pref::Max; }
        fail("expected MIN or MAX");
    }

    void parse_rel_decl(RelationSchema& schema, std::string& path) {
        expect_keyword("RELATION");
        schema.name = expect_ident("relation name");
        if (!at_keyword("FROM")) fail("expected keyword FROM");
        // the path is lexed raw (it may contain '.', '/', ...), so advance
        // the stream directly instead of through bump()
        Token p = lex.next_raw();
        if (p.text.empty()) throw ParseError(p.line, p.col, "expected file path");
        path = p.text;
        bump();
    }

    void parse_join_cond(int slot) {
        const Ref a = parse_ref();
        JoinOp op;
        if (at_keyword("EQ")) op = JoinOp::Eq;
        else if (at_keyword("LT")) op = JoinOp::Lt;
        else if (at_keyword("LE")) op = JoinOp::Le;
        else if (at_keyword("GT")) op = JoinOp::Gt;
        else if (at_keyword("GE")) op = JoinOp::Ge;
        else fail("expected join operator EQ/LT/LE/GT/GE");
        bump();
        const Ref b = parse_ref();
        if (a.side != 0)
            throw ParseError(a.line, a.col,
                             "the first operand of a join condition must belong to "
                             "the first declared relation");
        if (b.side != 1)
            throw ParseError(b.line, b.col,
                             "the second operand of a join condition must belong to "
                             "the second declared relation");
        spec.joins.push_back(op);
        add_column(a, RoleKind::Join, slot, Pref::Min);
        add_column(b, RoleKind::Join, slot, Pref::Min);
    }

    void parse_agg(int slot) {
        expect_keyword("AGG");
        AggSpec agg;
        agg.name = expect_ident("aggregate name");
        expect_punct('=');
        if (at_keyword("SUM")) agg.fn = AggFn::Sum;
        else if (at_keyword("AVG")) agg.fn = AggFn::Avg;
        else if (at_keyword("MIN")) agg.fn = AggFn::Min;
        else if (at_keyword("MAX")) agg.fn = AggFn::Max;
        else fail("expected aggregate function SUM/AVG/MIN/MAX");
        bump();
        expect_punct('(');
        const Ref a = parse_ref();
        expect_punct(',');
        const Ref b = parse_ref();
        expect_punct(')');
        expect_keyword("PREF");
        agg.pref = parse_minmax_pref();
        if (a.side != 0)
            throw ParseError(a.line, a.col,
                             "the first aggregate input must belong to the first "
                             "declared relation");
        if (b.side != 1)
            throw ParseError(b.line, b.col,
                             "the second aggregate input must belong to the second "
                             "declared relation");
        spec.aggregates.push_back(agg);
        add_column(a, RoleKind::Aggregate, slot, Pref::Min);
        add_column(b, RoleKind::Aggregate, slot, Pref::Min);
    }

    void parse_local() {
        expect_keyword("LOCAL");
        const Ref r = parse_ref();
        expect_keyword("PREF");
        const Pref p = parse_minmax_pref();
        add_column(r, RoleKind::Local, -1, p);
    }

    QuerySpec run() {
        skip_semis();
        parse_rel_decl(spec.left, spec.left_path);
        skip_semis();
        parse_rel_decl(spec.right, spec.right_path);
        if (spec.left.name == spec.right.name)
            fail("the two relations must have distinct names");
        skip_semis();
        expect_keyword("JOIN");
        int slot = 0;
        parse_join_cond(slot++);
        while (cur.kind == Token::Punct && cur.text[0] == ',') {
            bump();
            parse_join_cond(slot++);
        }
        skip_semis();
        if (!at_keyword("AGG")) fail("ASJQ requires at least one aggregate");
        int agg_slot = 0;
        while (at_keyword("AGG")) {
            parse_agg(agg_slot++);
            skip_semis();
        }
        while (at_keyword("LOCAL")) {
            parse_local();
            skip_semis();
        }
        if (cur.kind != Token::End) fail("unexpected trailing input");
        return std::move(spec);
    }
};

std::string ref_str(const RelationSchema& s, RoleKind kind, int slot) {
    for (const Column& c : s.columns)
        if (c.kind == kind && c.slot == slot) return s.name + "." + c.name;
    return s.name + ".?";
}

// -------------------------------------------------------------- CSV input

bool parse_field(const std::string& f, double& out) {
    // HH:MM time literal -> minutes since midnight
    if (const std::size_t colon = f.find(':'); colon != std::string::npos) {
        int h = 0, m = 0;
        auto [p1, e1] = std::from_chars(f.data(), f.data() + colon, h);
        auto [p2, e2] =
            std::from_chars(f.data() + colon + 1, f.data() + f.size(), m);
        if (e1 != std::errc{} || e2 != std::errc{} || p1 != f.data() + colon ||
            p2 != f.data() + f.size() || m < 0 || m > 59 || h < 0)
            return false;
        out = h * 60 + m;
        return true;
    }
    const char* first = f.data();
    const char* last = f.data() + f.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && p == last;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') { out.push_back(field); field.clear(); }
        else if (c != '\r') field += c;
    }
    out.push_back(field);
    for (std::string& f : out) {  // trim surrounding blanks
        const std::size_t a = f.find_first_not_of(" \t");
        const std::size_t b = f.find_last_not_of(" \t");
        f = a == std::string::npos ? "" : f.substr(a, b - a + 1);
    }
    return out;
}

}  // namespace

QuerySpec parse_query(const std::string& text) { return Parser(text).run(); }

std::string print_query(const QuerySpec& spec) {
    std::ostringstream os;
    os << "RELATION " << spec.left.name << " FROM " << spec.left_path << "\n";
    os << "RELATION " << spec.right.name << " FROM " << spec.right_path << "\n";
    os << "JOIN ";
    for (std::size_t i = 0; i < spec.joins.size(); ++i) {
        if (i) os << ", ";
        os << ref_str(spec.left, RoleKind::Join, static_cast<int>(i)) << " "
           << to_string(spec.joins[i]) << " "
           << ref_str(spec.right, RoleKind::Join, static_cast<int>(i));
    }
    os << "\n";
    for (std::size_t i = 0; i < spec.aggregates.size(); ++i) {
        const AggSpec& a = spec.aggregates[i];
        os << "AGG " << a.name << " = " << to_string(a.fn) << "("
           << ref_str(spec.left, RoleKind::Aggregate, static_cast<int>(i)) << ", "
           << ref_str(spec.right, RoleKind::Aggregate, static_cast<int>(i))
           << ") PREF " << to_string(a.pref) << "\n";
    }
    for (const RelationSchema* s : {&spec.left, &spec.right})
        for (const Column& c : s->columns)
            if (c.kind == RoleKind::Local)
                os << "LOCAL " << s->name << "." << c.name << " PREF "
                   << to_string(c.pref) << "\n";
    return os.str();
}

Relation load_relation(const std::string& path, const RelationSchema& schema) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "': empty file, header expected");
    const std::vector<std::string> header = split_csv_line(line);
    for (std::size_t i = 0; i < header.size(); ++i)
        for (std::size_t k = i + 1; k < header.size(); ++k)
            if (header[i] == header[k])
                throw IoError("'" + path + "': duplicate header column '" + header[i] + "'");

    std::vector<int> src(schema.columns.size(), -1);
    for (std::size_t i = 0; i < schema.columns.size(); ++i) {
        const auto it = std::find(header.begin(), header.end(), schema.columns[i].name);
        if (it == header.end())
            throw IoError("'" + path + "': missing column '" + schema.columns[i].name + "'");
        src[i] = static_cast<int>(it - header.begin());
    }

    Relation rel;
    rel.schema = schema;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw IoError("'" + path + "' row " + std::to_string(row) + ": expected " +
                          std::to_string(header.size()) + " fields, got " +
                          std::to_string(fields.size()));
        for (std::size_t i = 0; i < schema.columns.size(); ++i) {
            double v;
            if (!parse_field(fields[src[i]], v))
                throw IoError("'" + path + "' row " + std::to_string(row) + ", column '" +
                              schema.columns[i].name + "': non-numeric value '" +
                              fields[src[i]] + "'");
            rel.values.push_back(v);
        }
    }
    return rel;
}

LoadedQuery load_query_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open query file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    LoadedQuery lq;
    lq.spec = parse_query(buf.str());

    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };
    lq.left = load_relation(resolve(lq.spec.left_path), lq.spec.left);
    lq.right = load_relation(resolve(lq.spec.right_path), lq.spec.right);
    return lq;
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

void write_results(const std::string& path, std::span<const IdPair> result,
                   const CompiledQuery& q, const Relation& A, const Relation& B) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");

    out << "left_id,right_id";
    for (int c : q.a.local_cols) out << "," << A.schema.name << "." << A.schema.columns[c].name;
    for (int c : q.b.local_cols) out << "," << B.schema.name << "." << B.schema.columns[c].name;
    for (const AggSpec& a : q.spec.aggregates) out << "," << a.name;
    out << "\n";

    std::vector<double> vec(q.joined_dim());
    for (IdPair id : result) {
        joined_vector(q, A, B, id.left, id.right, vec.data());
        out << id.left << "," << id.right;
        for (double v : vec) out << "," << format_double(v);
        out << "\n";
    }
    if (!out) throw IoError("write failure on '" + path + "'");
}

void write_report(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "join_pairs," << report.join_pairs << "\n"
        << "phase1_emitted," << report.phase1_emitted << "\n"
        << "phase2_candidates," << report.phase2_candidates << "\n"
        << "phase2_emitted," << report.phase2_emitted << "\n"
        << "comparisons," << report.comparisons << "\n"
        << "wall_ms," << format_double(report.wall_ms) << "\n";
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace asjq
