#include "protoforge/enumerate.hpp"

#include <algorithm>
#include <cassert>

namespace protoforge {

CachedEnumerator::CachedEnumerator(Grammar g, bool reduce, bool shortcircuit)
    : g_(std::move(g)), reduce_(reduce), shortcircuit_(shortcircuit) {
  g_.validate();
  for (const auto& nt : g_.nt_order) {
    cache_[nt] = {};
    seen_[nt] = {};
  }
}

void CachedEnumerator::consider(const std::string& nt, const ExprPtr& e,
                                int n, bool& added_any) {
  ++stats_.built;
  if (reduce_) {
    NormalForm nf = normalize(e);
    auto& seen = seen_[nt];
    if (seen.count(nf.key)) {
      ++stats_.skipped_reduce;
      return;
    }
    seen.insert(nf.key);
  }
  auto& buckets = cache_[nt];
  while (static_cast<int>(buckets.size()) <= n) buckets.emplace_back();
  buckets[n].push_back(Entry{e, to_string(e)});
  added_any = true;
  max_nonempty_ = std::max(max_nonempty_, n);
  if (nt == g_.start) {
    emit_buffer_.push_back(e);
    while (static_cast<int>(by_size_.size()) <= n) by_size_.emplace_back();
    by_size_[n].push_back(e);
    ++stats_.emitted;
  }
}

int CachedEnumerator::max_composition_size() const {
  int best = 0;
  std::map<std::string, int> max_sz;
  for (const auto& [nt, buckets] : cache_) {
    int m = 0;
    for (int n = static_cast<int>(buckets.size()) - 1; n >= 1; --n)
      if (!buckets[n].empty()) {
        m = n;
        break;
      }
    max_sz[nt] = m;
  }
  for (const auto& nt : g_.nt_order) {
    for (const auto& p : g_.productions.at(nt)) {
      if (p.placeholders.empty()) {
        best = std::max(best, p.overhead);
        continue;
      }
      int total = p.overhead;
      bool feasible = true;
      for (const auto& ph : p.placeholders) {
        if (max_sz[ph] == 0) {
          feasible = false;
          break;
        }
        total += max_sz[ph];
      }
      if (feasible) best = std::max(best, total);
    }
  }
  return best;
}

void CachedEnumerator::fill_next_size() {
  int n = filled_ + 1;
  bool added_any = false;
  for (const auto& nt : g_.nt_order) {
    for (const auto& p : g_.productions.at(nt)) {
      std::size_t arity = p.placeholders.size();
      if (arity == 0) {
        if (p.overhead == n) consider(nt, p.templ, n, added_any);
        continue;
      }
      int budget = n - p.overhead;
      if (budget < static_cast<int>(arity)) continue;

      // size compositions (s1..sk), si >= 1, sum = budget, lexicographic
      std::vector<int> comp(arity, 1);
      comp.back() = budget - static_cast<int>(arity) + 1;
      while (true) {
        bool skip_comp = false;
        if (shortcircuit_ && p.commutative_pair && comp[0] > comp[1])
          skip_comp = true;

        if (!skip_comp) {
          std::vector<const std::vector<Entry>*> lists(arity);
          bool empty = false;
          for (std::size_t i = 0; i < arity; ++i) {
            const auto& buckets = cache_[p.placeholders[i]];
            if (comp[i] >= static_cast<int>(buckets.size()) ||
                buckets[comp[i]].empty()) {
              empty = true;
              break;
            }
            lists[i] = &buckets[comp[i]];
          }
          if (!empty) {
            std::vector<std::size_t> idx(arity, 0);
            while (true) {
              bool skip_tuple = false;
              if (shortcircuit_ && p.commutative_pair) {
                const Entry& a = (*lists[0])[idx[0]];
                const Entry& b = (*lists[1])[idx[1]];
                if (comp[0] == comp[1]) {
                  if (p.idempotent_pair && idx[0] == idx[1])
                    skip_tuple = true;
                  else if (a.ser > b.ser)
                    skip_tuple = true;
                }
              }
              if (!skip_tuple) {
                if (p.commutative_pair) ++stats_.pairs_commutative;
                std::vector<ExprPtr> children(arity);
                for (std::size_t i = 0; i < arity; ++i)
                  children[i] = (*lists[i])[idx[i]].expr;
                consider(nt, compose(p, children), n, added_any);
              }
              bool done = true;
              for (std::size_t i = arity; i > 0;) {
                --i;
                if (++idx[i] < lists[i]->size()) {
                  done = false;
                  break;
                }
                idx[i] = 0;
              }
              if (done) break;
            }
          }
        }

        // next composition of the same sum
        bool more = false;
        for (std::size_t i = arity - 1; i > 0;) {
          --i;
          int tail = 0;
          for (std::size_t j = 0; j <= i; ++j) tail += comp[j];
          ++comp[i];
          ++tail;
          int rest = budget - tail;
          if (rest >= static_cast<int>(arity - 1 - i)) {
            for (std::size_t j = i + 1; j + 1 < arity; ++j) comp[j] = 1;
            comp[arity - 1] = rest - static_cast<int>(arity - 2 - i);
            more = true;
            break;
          }
          comp[i] = 1;
        }
        if (!more) break;
      }
    }
  }
  filled_ = n;
  if (!added_any && filled_ >= max_composition_size()) exhausted_ = true;
}

std::optional<ExprPtr> CachedEnumerator::next() {
  while (emit_pos_ >= emit_buffer_.size()) {
    if (exhausted_) return std::nullopt;
    fill_next_size();
  }
  return emit_buffer_[emit_pos_++];
}

const std::vector<ExprPtr>& CachedEnumerator::exprs_of_size(int n) {
  while (filled_ < n && !exhausted_) fill_next_size();
  static const std::vector<ExprPtr> kEmpty;
  if (n < 1 || n >= static_cast<int>(by_size_.size())) return kEmpty;
  return by_size_[n];
}

std::vector<std::set<std::string>> CachedEnumerator::start_class_keys() const {
  std::vector<std::set<std::string>> out(by_size_.size());
  for (std::size_t n = 0; n < by_size_.size(); ++n)
    for (const auto& e : by_size_[n]) out[n].insert(normalize(e).key);
  return out;
}

NaiveEnumerator::NaiveEnumerator(Grammar g) : g_(std::move(g)) {
  g_.validate();
  QueueEntry root;
  root.expr = mk::placeholder(g_.start, g_.nt_type(g_.start));
  root.size = 1;
  root.seq = seq_++;
  heap_.push_back(root);
}

std::vector<ExprPtr> NaiveEnumerator::expand(const Grammar& g,
                                             const ExprPtr& partial) {
  std::vector<std::string> phs;
  {
    struct {
      void operator()(const ExprPtr& e, std::vector<std::string>& out) {
        if (e->kind == ExprKind::Placeholder) {
          out.push_back(e->name);
          return;
        }
        for (const auto& c : e->children) (*this)(c, out);
      }
    } collect;
    collect(partial, phs);
  }
  std::vector<ExprPtr> out;
  if (phs.empty()) return out;
  // every combination of productions, substituted simultaneously
  std::vector<const std::vector<Production>*> prods;
  for (const auto& ph : phs) prods.push_back(&g.productions.at(ph));
  std::vector<std::size_t> idx(phs.size(), 0);
  while (true) {
    std::vector<ExprPtr> replacements;
    replacements.reserve(phs.size());
    for (std::size_t i = 0; i < phs.size(); ++i)
      replacements.push_back((*prods[i])[idx[i]].templ);
    // reuse placeholder substitution from compose(): build a pseudo
    // production around the partial expression
    Production shell;
    shell.templ = partial;
    shell.placeholders = phs;
    out.push_back(compose(shell, replacements));
    bool done = true;
    for (std::size_t i = phs.size(); i > 0;) {
      --i;
      if (++idx[i] < prods[i]->size()) {
        done = false;
        break;
      }
      idx[i] = 0;
    }
    if (done) break;
  }
  return out;
}

std::optional<ExprPtr> NaiveEnumerator::pump() {
  while (!heap_.empty()) {
    std::pop_heap(heap_.begin(), heap_.end(), std::greater<>());
    QueueEntry top = std::move(heap_.back());
    heap_.pop_back();
    if (!contains_placeholder(top.expr)) {
      ++stats_.emitted;
      int n = size(top.expr);
      while (static_cast<int>(by_size_.size()) <= n) by_size_.emplace_back();
      by_size_[n].push_back(top.expr);
      max_nonempty_ = std::max(max_nonempty_, n);
      return top.expr;
    }
    for (auto& e : expand(g_, top.expr)) {
      ++stats_.built;
      QueueEntry entry;
      entry.size = size(e);
      entry.seq = seq_++;
      entry.expr = std::move(e);
      heap_.push_back(std::move(entry));
      std::push_heap(heap_.begin(), heap_.end(), std::greater<>());
    }
  }
  return std::nullopt;
}

std::optional<ExprPtr> NaiveEnumerator::next() {
  if (lookahead_) {
    auto e = std::move(*lookahead_);
    lookahead_.reset();
    return e;
  }
  return pump();
}

const std::vector<ExprPtr>& NaiveEnumerator::exprs_of_size(int n) {
  // Emission sizes are nondecreasing, so the bucket for n is complete once
  // something of a larger size has been produced (or the queue drains).
  while (true) {
    if (lookahead_ && size(*lookahead_) > n) break;
    auto e = pump();
    if (!e) break;
    if (size(*e) > n) {
      lookahead_ = std::move(e);
      break;
    }
  }
  static const std::vector<ExprPtr> kEmpty;
  if (n < 1 || n >= static_cast<int>(by_size_.size())) return kEmpty;
  return by_size_[n];
}

bool NaiveEnumerator::exhausted() const {
  return heap_.empty() && !lookahead_;
}

JointEnumerator::JointEnumerator(
    std::vector<std::string> hole_names,
    std::vector<std::unique_ptr<SizedExprSource>> sources,
    std::optional<int> max_combined_size)
    : holes_(std::move(hole_names)),
      sources_(std::move(sources)),
      max_combined_(max_combined_size) {
  assert(holes_.size() == sources_.size());
  k_ = static_cast<int>(holes_.size());  // every hole needs size >= 1
}

bool JointEnumerator::all_exhausted_below() const {
  int total = 0;
  for (const auto& s : sources_) {
    if (!s->exhausted()) return false;
    total += s->max_nonempty_size();
  }
  return k_ > total;
}

bool JointEnumerator::next_composition() {
  std::size_t m = holes_.size();
  while (true) {
    if (comp_.empty()) {
      if (k_ < static_cast<int>(m)) return false;
      comp_.assign(m, 1);
      comp_[m - 1] = k_ - static_cast<int>(m) + 1;
    } else {
      bool more = false;
      for (std::size_t i = m - 1; i > 0;) {
        --i;
        int used = 0;
        for (std::size_t j = 0; j <= i; ++j) used += comp_[j];
        ++comp_[i];
        ++used;
        int rest = k_ - used;
        if (rest >= static_cast<int>(m - 1 - i)) {
          for (std::size_t j = i + 1; j + 1 < m; ++j) comp_[j] = 1;
          if (m >= 2) comp_[m - 1] = rest - static_cast<int>(m - 2 - i);
          more = true;
          break;
        }
        comp_[i] = 1;
      }
      if (!more) return false;
    }
    // fetch lists; all must be non-empty
    lists_.assign(m, nullptr);
    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      lists_[i] = &sources_[i]->exprs_of_size(comp_[i]);
      if (lists_[i]->empty()) {
        ok = false;
        break;
      }
    }
    if (ok) {
      tuple_.assign(m, 0);
      return true;
    }
  }
}

std::optional<JointCandidate> JointEnumerator::next() {
  std::size_t m = holes_.size();
  if (m == 0) return std::nullopt;
  while (true) {
    if (max_combined_ && k_ > *max_combined_) return std::nullopt;
    if (!comp_valid_) {
      if (!next_composition()) {
        if (all_exhausted_below()) return std::nullopt;
        ++k_;
        comp_.clear();
        continue;
      }
      comp_valid_ = true;
    }

    JointCandidate cand;
    cand.combined_size = k_;
    cand.sizes = comp_;
    for (std::size_t i = 0; i < m; ++i)
      cand.completion.exprs[holes_[i]] = (*lists_[i])[tuple_[i]];

    // advance tuple odometer, last hole fastest
    bool done = true;
    for (std::size_t i = m; i > 0;) {
      --i;
      if (++tuple_[i] < lists_[i]->size()) {
        done = false;
        break;
      }
      tuple_[i] = 0;
    }
    if (done) comp_valid_ = false;

    // monotone combined sizes, by construction
    assert(cand.combined_size >= last_emitted_size_);
    last_emitted_size_ = cand.combined_size;
    return cand;
  }
}

}  // namespace protoforge
