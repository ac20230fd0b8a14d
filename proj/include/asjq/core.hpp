#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Core model: attribute roles, preferences, queries, relations and the
// three dominance relations (prune, weak-local, joined) the algorithms
// build on.  Everything here is immutable after construction and safe to
// share across threads.

namespace asjq {

enum class Pref : std::uint8_t { Min, Max, Equal };
enum class JoinOp : std::uint8_t { Eq, Lt, Le, Gt, Ge };
enum class AggFn : std::uint8_t { Sum, Avg, Min, Max };
enum class Side : std::uint8_t { Left, Right };

const char* to_string(Pref p);
const char* to_string(JoinOp op);
const char* to_string(AggFn fn);

/// SUM/AVG map a strictly better input (other one fixed) to a strictly
/// better output; MIN/MAX only to a better-or-equal one.
bool agg_is_strict(AggFn fn);

double apply_agg(AggFn fn, double a, double b);

/// Preference a pruned tuple's join attribute must satisfy so that every
/// join partner of the dominated tuple is also a partner of the dominator.
Pref derive_join_preference(JoinOp op, Side side);

enum class RoleKind : std::uint8_t { Join, Local, Aggregate };

struct Column {
    std::string name;
    RoleKind kind = RoleKind::Local;
    int slot = -1;              // join / aggregate slot index, -1 for locals
    Pref pref = Pref::Min;      // preference for locals; unused otherwise

    friend bool operator==(const Column&, const Column&) = default;
};

struct RelationSchema {
    std::string name;
    std::vector<Column> columns;

    int column_index(const std::string& col) const;  // -1 if absent

    friend bool operator==(const RelationSchema&, const RelationSchema&) = default;
};

struct AggSpec {
    std::string name;   // output column name
    AggFn fn = AggFn::Sum;
    Pref pref = Pref::Min;  // preference on the aggregated value

    friend bool operator==(const AggSpec&, const AggSpec&) = default;
};

/// Full ASJQ description.  joins[i] is the operator of join slot i,
/// read as  left.a <op> right.b.
struct QuerySpec {
    RelationSchema left, right;
    std::vector<JoinOp> joins;
    std::vector<AggSpec> aggregates;
    std::string left_path, right_path;  // data sources, informational

    friend bool operator==(const QuerySpec&, const QuerySpec&) = default;
};

/// Loaded base table.  Values are finite numerics; times are minutes
/// since midnight, categories integer codes.  Row ids are ordinals.
struct Relation {
    RelationSchema schema;
    std::vector<double> values;  // row-major, schema.columns.size() per row

    std::size_t width() const { return schema.columns.size(); }
    std::size_t size() const { return width() == 0 ? 0 : values.size() / width(); }
    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * width(), width()};
    }
};

enum class JoinRegime : std::uint8_t { Equi, Mixed };
enum class GuaranteeRegime : std::uint8_t { EquiStrict, Restricted };

struct Validation {
    std::vector<std::string> errors;
    JoinRegime join_regime = JoinRegime::Equi;
    GuaranteeRegime regime = GuaranteeRegime::Restricted;
    bool weak_aggregates = false;  // any MIN/MAX aggregate present

    bool ok() const { return errors.empty(); }
};

/// Checks the schema/spec invariants and classifies the soundness regime.
Validation validate_query(const QuerySpec& spec);

// ---------------------------------------------------------------------
// Compiled form: column indices and comparison signs resolved once.

/// Per-relation view of a query: which columns play which role and how
/// values compare.  sign +1 means smaller preferred, -1 larger.
struct SideView {
    std::vector<int> local_cols;
    std::vector<std::int8_t> local_signs;
    std::vector<int> agg_cols;        // slot order
    std::vector<std::int8_t> agg_signs;  // preference on the aggregated value
    std::vector<std::uint8_t> agg_strict;  // slot uses a strict (SUM/AVG) function
    std::vector<int> join_cols;       // slot order
    std::vector<Pref> join_prefs;     // derived via derive_join_preference
};

struct CompiledQuery {
    QuerySpec spec;
    SideView a, b;
    std::vector<JoinOp> join_ops;        // slot order
    std::vector<AggFn> agg_fns;          // slot order
    std::vector<std::int8_t> joined_signs;  // m1 + m2 + n
    int m1 = 0, m2 = 0, n = 0, j = 0;

    int joined_dim() const { return m1 + m2 + n; }
};

/// Precondition: validate_query(spec).ok().
CompiledQuery compile(const QuerySpec& spec);

const SideView& side_view(const CompiledQuery& q, Side s);

// ---------------------------------------------------------------------
// Dominance relations.

/// Full dominance used for pruning: preferred-or-equal on every local and
/// aggregate attribute, derived join preference satisfied on every join
/// attribute (EQUAL means exactly equal), strictly preferred on at least
/// one local attribute or one strictly-aggregated attribute.  Join
/// attributes never supply the strictness, and neither do MIN/MAX
/// aggregate slots: a strictly better input to a weak aggregate can still
/// tie after aggregation, so it cannot justify discarding the tuple.
bool prune_dominates(const Relation& rel, std::size_t u, std::size_t u2,
                     const SideView& view);

/// Locals-only, tie-admitting dominance by a distinct tuple: u preferred
/// -or-equal to u2 on every local attribute.  Caller guarantees u != u2.
bool weak_local_dominates(const Relation& rel, std::size_t u, std::size_t u2,
                          const SideView& view);

/// Standard skyline dominance over two equal-length vectors with per
/// -component signs: preferred-or-equal everywhere, strict somewhere.
bool joined_dominates(std::span<const double> a, std::span<const double> b,
                      std::span<const std::int8_t> signs);

/// Assembles the skyline vector of the pair (u, v): m1 left locals,
/// m2 right locals, n aggregated values, into out[0 .. m1+m2+n).
void joined_vector(const CompiledQuery& q, const Relation& A, const Relation& B,
                   std::size_t u, std::size_t v, double* out);

/// True iff (u, v) satisfies every join condition.
bool join_compatible(const CompiledQuery& q, const Relation& A, const Relation& B,
                     std::size_t u, std::size_t v);

}  // namespace asjq
