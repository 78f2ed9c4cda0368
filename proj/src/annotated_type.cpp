#include "sizelab/annotated_type.hpp"

#include "sizelab/term.hpp"

namespace sizelab {

ann_ptr mk_ann_base(std::string sort, size_ptr ann) {
  auto t = std::make_shared<ann_type>();
  t->sort = std::move(sort);
  t->ann = std::move(ann);
  return t;
}

ann_ptr mk_ann_arrow(ann_ptr dom, ann_ptr cod) {
  auto t = std::make_shared<ann_type>();
  t->dom = std::move(dom);
  t->cod = std::move(cod);
  return t;
}

type_ptr erase(const ann_ptr& t) {
  if (t->is_base()) return mk_sort(t->sort);
  return mk_arrow(erase(t->dom), erase(t->cod));
}

bool ann_equal(const ann_ptr& a, const ann_ptr& b) {
  if (a == b) return true;
  if (a->is_base() != b->is_base()) return false;
  if (a->is_base())
    return a->sort == b->sort && normalize(a->ann) == normalize(b->ann);
  return ann_equal(a->dom, b->dom) && ann_equal(a->cod, b->cod);
}

ann_ptr annot_inf(const type_ptr& t) {
  if (t->is_base()) return mk_ann_base(t->sort, sz_inf());
  return mk_ann_arrow(annot_inf(t->dom), annot_inf(t->cod));
}

ann_ptr annot_rec(const signature& sig, const std::string& b, const size_ptr& alpha,
                  const type_ptr& t) {
  if (t->is_base())
    return mk_ann_base(t->sort, sig.sort_equiv(t->sort, b) ? alpha : sz_inf());
  return mk_ann_arrow(annot_rec(sig, b, alpha, t->dom),
                      annot_rec(sig, b, alpha, t->cod));
}

ann_ptr apply_size_subst(const ann_ptr& t, const size_subst& phi) {
  if (t->is_base()) return mk_ann_base(t->sort, apply_size_subst(t->ann, phi));
  return mk_ann_arrow(apply_size_subst(t->dom, phi), apply_size_subst(t->cod, phi));
}

std::set<std::string> ann_size_vars(const ann_ptr& t) {
  if (t->is_base()) return size_vars(t->ann);
  std::set<std::string> out = ann_size_vars(t->dom);
  std::set<std::string> cod = ann_size_vars(t->cod);
  out.insert(cod.begin(), cod.end());
  return out;
}

bool subtype(const ann_ptr& t, const ann_ptr& u) {
  if (t->is_base() != u->is_base())
    throw erasure_mismatch("subtype requires types of equal erasure");
  if (t->is_base()) {
    if (t->sort != u->sort) throw erasure_mismatch("subtype on different sorts");
    size_cmp c = compare(t->ann, u->ann);
    return c == size_cmp::lt || c == size_cmp::le || c == size_cmp::eq;
  }
  return subtype(u->dom, t->dom) && subtype(t->cod, u->cod);
}

ctor_annotation annotate_constructor(const signature& sig, const std::string& ctor) {
  const symbol_decl* decl = sig.find_symbol(ctor);
  if (!decl || !decl->is_constructor)
    throw type_error("UnknownSymbol", "'" + ctor + "' is not a declared constructor");
  const std::string b = result_sort(decl->type);
  const auto args = argument_types(decl->type);
  ctor_annotation out;
  std::vector<size_ptr> ind_vars;
  std::vector<ann_ptr> doms;
  for (size_t i = 0; i < args.size(); ++i) {
    std::string v = "a" + std::to_string(i + 1);
    out.size_vars.push_back(v);
    doms.push_back(annot_rec(sig, b, sz_var(v), args[i]));
    if (sig.ind(ctor).count(static_cast<int>(i) + 1)) ind_vars.push_back(sz_var(v));
  }
  out.result_ann = ind_vars.empty() ? sz_zero() : sz_succ(sz_max_of(ind_vars));
  ann_ptr t = mk_ann_base(b, out.result_ann);
  for (auto it = doms.rbegin(); it != doms.rend(); ++it) t = mk_ann_arrow(*it, t);
  out.type = t;
  return out;
}

size_ptr ctor_size(const signature& sig, const std::string& ctor,
                   const std::vector<size_ptr>& arg_sizes) {
  const auto& ind = sig.ind(ctor);
  if (ind.empty()) return sz_zero();
  std::vector<size_ptr> parts;
  for (int i : ind) {
    if (i < 1 || i > static_cast<int>(arg_sizes.size()))
      throw type_error("ArrowMismatch", "constructor '" + ctor + "' applied to too few arguments");
    parts.push_back(arg_sizes[i - 1]);
  }
  for (const auto& p : parts)
    if (size_is_inf(p)) return sz_inf();
  return sz_succ(sz_max_of(parts));
}

namespace {
void positions_rec(const ann_ptr& t, std::vector<int>& path, bool positive,
                   position_report& out) {
  if (t->is_base()) {
    out.leaves.push_back({path, positive, ""});
    std::vector<int> apath = path;
    apath.push_back(0);
    for (const auto& v : size_vars(t->ann)) {
      out.leaves.push_back({apath, positive, v});
      out.var_polarity.emplace(v, positive);
    }
    return;
  }
  path.push_back(1);
  positions_rec(t->dom, path, !positive, out);
  path.back() = 2;
  positions_rec(t->cod, path, positive, out);
  path.pop_back();
}
}  // namespace

position_report positions(const ann_ptr& t) {
  position_report out;
  std::vector<int> path;
  positions_rec(t, path, true, out);
  return out;
}

std::string to_string(const ann_ptr& t) {
  if (t->is_base()) {
    if (t->ann->kind == size_kind::inf) return t->sort;
    return t->sort + "{" + to_string(t->ann) + "}";
  }
  std::string dom = to_string(t->dom);
  if (!t->dom->is_base()) dom = "(" + dom + ")";
  return dom + " -> " + to_string(t->cod);
}

}  // namespace sizelab
