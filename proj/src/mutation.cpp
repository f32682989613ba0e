#include "agdbg/mutation.hpp"

#include "agdbg/format.hpp"
#include "agdbg/validate.hpp"

#include <random>

namespace agdbg {

const char* mutation_op_name(MutationOp op) {
  switch (op) {
    case MutationOp::LiteralPlusOne: return "literal+1";
    case MutationOp::LiteralMinusOne: return "literal-1";
    case MutationOp::RefPlusOne: return "ref+1";
    case MutationOp::RefMinusOne: return "ref-1";
    case MutationOp::SwapAddSub: return "swap+-";
    case MutationOp::OccurrenceSwap: return "occurrence";
    case MutationOp::DropLeft: return "drop-left";
    case MutationOp::DropRight: return "drop-right";
  }
  return "?";
}

namespace {

bool droppable(ExprKind k) {
  return is_arithmetic(k) || k == ExprKind::Concat;
}

void candidate_sites(const Grammar& g, std::size_t pi, std::size_t ri, const Expr& e,
                     std::vector<int>& path, std::vector<MutationSite>& out) {
  const Production& p = g.productions[pi];
  auto add = [&](MutationOp op, int occurrence = 0) {
    out.push_back(MutationSite{pi, ri, path, op, occurrence});
  };
  switch (e.kind) {
    case ExprKind::Literal:
      if (e.literal.is_rational()) {
        add(MutationOp::LiteralPlusOne);
        add(MutationOp::LiteralMinusOne);
      }
      break;
    case ExprKind::Ref: {
      Symbol sym = p.symbol_at(e.ref.occurrence);
      const AttributeDecl* d = g.find_decl(sym.name, e.ref.attr);
      if (d && d->sort == Sort::Rational) {
        add(MutationOp::RefPlusOne);
        add(MutationOp::RefMinusOne);
      }
      for (int k = 0; k < p.occurrence_count(); ++k) {
        if (k == e.ref.occurrence) continue;
        Symbol other = p.symbol_at(k);
        if (other.terminal || !g.find_decl(other.name, e.ref.attr)) continue;
        add(MutationOp::OccurrenceSwap, k);
      }
      break;
    }
    default:
      break;
  }
  if (e.kind == ExprKind::Add || e.kind == ExprKind::Sub) add(MutationOp::SwapAddSub);
  if (e.args.size() == 2 && droppable(e.kind)) {
    add(MutationOp::DropLeft);
    add(MutationOp::DropRight);
  }
  for (std::size_t i = 0; i < e.args.size(); ++i) {
    path.push_back(static_cast<int>(i));
    candidate_sites(g, pi, ri, e.args[i], path, out);
    path.pop_back();
  }
}

Expr mutate_expr(const Expr& e, const MutationSite& site) {
  const Rational one(1);
  switch (site.op) {
    case MutationOp::LiteralPlusOne:
    case MutationOp::LiteralMinusOne:
      if (e.kind != ExprKind::Literal || !e.literal.is_rational()) break;
      return Expr::make_literal(Value(site.op == MutationOp::LiteralPlusOne
                                          ? Rational(e.literal.as_rational() + one)
                                          : Rational(e.literal.as_rational() - one)));
    case MutationOp::RefPlusOne:
    case MutationOp::RefMinusOne:
      if (e.kind != ExprKind::Ref) break;
      return Expr::make_binary(site.op == MutationOp::RefPlusOne ? ExprKind::Add : ExprKind::Sub,
                               e, Expr::make_literal(Value(one)));
    case MutationOp::SwapAddSub:
      if (e.kind == ExprKind::Add || e.kind == ExprKind::Sub) {
        Expr m = e;
        m.kind = e.kind == ExprKind::Add ? ExprKind::Sub : ExprKind::Add;
        return m;
      }
      break;
    case MutationOp::OccurrenceSwap:
      if (e.kind != ExprKind::Ref) break;
      return Expr::make_ref(AttrRef{site.occurrence, e.ref.attr});
    case MutationOp::DropLeft:
    case MutationOp::DropRight:
      if (e.args.size() != 2 || !droppable(e.kind)) break;
      return e.args[site.op == MutationOp::DropLeft ? 1 : 0];
  }
  throw std::invalid_argument(std::string("mutation ") + mutation_op_name(site.op) +
                              " does not apply at this site");
}

}  // namespace

Mutation apply_mutation(const Grammar& g, const MutationSite& site) {
  if (site.production >= g.productions.size() ||
      site.rule >= g.productions[site.production].rules.size())
    throw std::invalid_argument("mutation site outside the grammar");
  Mutation m{g, site, {}};
  Production& p = m.grammar.productions[site.production];
  AttributionRule& r = p.rules[site.rule];
  Expr* e = &r.expr;
  for (int i : site.path) {
    if (i < 0 || static_cast<std::size_t>(i) >= e->args.size())
      throw std::invalid_argument("mutation path outside the expression");
    e = &e->args[static_cast<std::size_t>(i)];
  }
  *e = mutate_expr(*e, site);
  const Production& orig = g.productions[site.production];
  m.description = p.id + ": " + format_rule(orig, orig.rules[site.rule]) + " -> " +
                  format_rule(p, r);
  return m;
}

std::vector<MutationSite> enumerate_mutations(const Grammar& g) {
  std::vector<MutationSite> raw;
  for (std::size_t pi = 0; pi < g.productions.size(); ++pi) {
    for (std::size_t ri = 0; ri < g.productions[pi].rules.size(); ++ri) {
      std::vector<int> path;
      candidate_sites(g, pi, ri, g.productions[pi].rules[ri].expr, path, raw);
    }
  }
  std::vector<MutationSite> out;
  for (const MutationSite& s : raw) {
    Mutation m = apply_mutation(g, s);
    if (m.grammar.productions[s.production].rules[s.rule] == g.productions[s.production].rules[s.rule])
      continue;
    if (validate_grammar(m.grammar).empty()) out.push_back(s);
  }
  return out;
}

Mutation mutate_rule(const Grammar& g, std::uint64_t seed) {
  std::vector<MutationSite> sites = enumerate_mutations(g);
  if (sites.empty()) throw NoMutationSite("no applicable mutation site");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, sites.size() - 1);
  return apply_mutation(g, sites[pick(rng)]);
}

}  // namespace agdbg
