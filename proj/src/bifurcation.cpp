#include "yamflat/bifurcation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include "yamflat/errors.hpp"

namespace yamflat {

namespace {

Rational rational_pow(const Rational& base, long n) {
  if (n < 0) return rational_pow(1 / base, -n);
  Rational r = 1;
  for (long i = 0; i < n; ++i) r *= base;
  return r;
}

Real four_pi_sq() { return Real(PiPolynomial(4, 2)); }

Rational branch_rational(const FlatBranch& br, const Rational& t, std::pair<long, long> ex) {
  return br.a * rational_pow(t, ex.first) + br.b * rational_pow(t, -ex.second);
}

bool brackets_meet(const Rational& a_lo, const Rational& a_hi, const Rational& b_lo, const Rational& b_hi) {
  return !(a_hi < b_lo || b_hi < a_lo);
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned w = 0; w < std::min<std::size_t>(threads, n); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

SpectrumSlice flat_slice(const Scenario& s, const Rational& t, const Real& cutoff, const BifurcationOptions& o) {
  SpectralOptions so{o.precision_bits, o.limits};
  if (!s.projection) return bieberbach_spectrum(s.flat, cutoff, so);
  const CrystalGroup g = conjugate_group(s.flat, s.deformation(t), RationalVector(s.flat.dim()));
  return bieberbach_spectrum(g, cutoff, so);
}

// Closed-factor entries strictly below rho.
std::size_t closed_count_below(const Scenario& s, const Real& rho, int bits) {
  std::size_t n = 0;
  for (const auto& e : s.closed.spectrum.entries) {
    if (compare(e.eigenvalue, rho, bits) >= 0) break;
    ++n;
  }
  return n;
}

}  // namespace

Real Scenario::threshold() const { return closed.scal / Real(static_cast<long>(total_dim() - 1)); }

RationalMatrix Scenario::deformation(const Rational& t) const {
  if (t <= 0) throw Error(ErrorCode::InvalidInput, "collapse parameter must be positive");
  const std::size_t d = flat.dim();
  if (!projection) return RationalMatrix::identity(d);
  const long e = static_cast<long>(projection->rank());
  const long dl = static_cast<long>(d);
  return rational_pow(t, e - dl) * *projection + rational_pow(t, e) * (RationalMatrix::identity(d) - *projection);
}

std::pair<long, long> Scenario::exponents() const {
  if (!projection) return {0, 0};
  const long e = static_cast<long>(projection->rank());
  return {2 * (static_cast<long>(flat.dim()) - e), 2 * e};
}

void validate_scenario(const Scenario& s, int bits) {
  if (sign(s.closed.scal, bits) <= 0) throw Error(ErrorCode::NonPositiveScal, "closed factor needs scal > 0");
  if (compare(s.closed.volume, Real(1), bits) != 0)
    throw Error(ErrorCode::InvalidInput, "closed factor volume is " + s.closed.volume.to_string() + ", expected 1");
  const Rational flat_volume = s.flat.lattice().covolume() / Rational(static_cast<long>(s.flat.order()));
  if (flat_volume != 1)
    throw Error(ErrorCode::InvalidInput, "flat factor volume is " + to_string(flat_volume) + ", expected 1");
  if (!is_torsion_free(s.flat).torsion_free) throw Error(ErrorCode::InvalidGroup, "flat factor group has torsion");
  if (compare(s.closed.spectrum.cutoff, s.threshold(), bits) <= 0)
    throw Error(ErrorCode::IncompleteInput, "closed spectrum must be complete beyond the threshold");
  if (s.projection) CollapseFamily(s.flat, *s.projection);
}

IndexResult index_at(const Scenario& s, const Rational& t, const BifurcationOptions& o) {
  const int bits = o.precision_bits;
  const Real rho = s.threshold();
  const SpectrumSlice flat = flat_slice(s, t, rho * Real(ratio(9, 8)), o);
  IndexResult out;
  const auto& closed = s.closed.spectrum.entries;
  for (std::size_t j = 0; j < closed.size(); ++j) {
    if (compare(closed[j].eigenvalue, rho, bits) > 0) break;
    for (const auto& f : flat.entries) {
      const Real sum = closed[j].eigenvalue + f.eigenvalue;
      const int c = compare(sum, rho, bits);
      if (c > 0) break;
      if (c < 0) {
        out.index += closed[j].multiplicity * f.multiplicity;
      } else {
        out.equalities.push_back({j, closed[j].eigenvalue, f.eigenvalue, closed[j].multiplicity * f.multiplicity});
      }
    }
  }
  return out;
}

std::vector<FlatBranch> flat_branches(const Scenario& s, const Rational& norm_bound, const BifurcationOptions& o) {
  const Lattice dl = dual(s.flat.lattice());
  const RationalMatrix& basis = dl.basis();
  std::map<std::pair<Rational, Rational>, std::vector<std::vector<long>>> classes;
  const auto list = enumerate_short_vectors(dl, norm_bound, o.limits);
  for (const auto& v : list.vectors) {
    RationalVector k(v.coords.begin(), v.coords.end());
    const RationalVector y = basis * k;
    Rational a = v.norm_sq;
    if (s.projection) a = dot(y, *s.projection * y);
    classes[{a, v.norm_sq - a}].push_back(v.coords);
  }
  const HolonomyCharacter character(s.flat);
  std::vector<FlatBranch> out;
  out.push_back({0, 0, 1});
  for (const auto& [key, members] : classes) {
    const long m = character.multiplicity(members);
    if (m > 0) out.push_back({key.first, key.second, m});
  }
  std::stable_sort(out.begin(), out.end(), [](const FlatBranch& x, const FlatBranch& y) {
    const Rational nx = x.a + x.b, ny = y.a + y.b;
    return nx != ny ? nx < ny : x.a < y.a;
  });
  return out;
}

Real branch_value(const FlatBranch& br, const Real& t, std::pair<long, long> ex) {
  return four_pi_sq() * (Real(br.a) * t.pow(ex.first) + Real(br.b) * t.pow(-ex.second));
}

ConditionAResult condition_a_check(const Scenario& s, const Real& t, const BifurcationOptions& o) {
  const int bits = o.precision_bits;
  if (sign(t, bits) <= 0) throw Error(ErrorCode::InvalidInput, "collapse parameter must be positive");
  const Real rho = s.threshold();
  const auto ex = s.exponents();
  const Real tau = rho / four_pi_sq();
  const Rational bound = upper_bound(tau * (t.pow(-ex.first) + t.pow(ex.second)), bits);
  const auto branches = flat_branches(s, bound, o);
  ConditionAResult out;
  const auto& closed = s.closed.spectrum.entries;
  const std::size_t n = closed_count_below(s, rho, bits);
  for (std::size_t j = 0; j < n; ++j) {
    const Real target = rho - closed[j].eigenvalue;
    for (const auto& br : branches) {
      if (compare(branch_value(br, t, ex), target, bits) == 0) {
        out.holds = false;
        out.witnesses.push_back({j, closed[j].eigenvalue, br});
      }
    }
  }
  return out;
}

namespace {

// Roots of a t^p + b t^-q = tau on [lo, hi], bisected to width w.
void monotone_roots(const FlatBranch& br, std::pair<long, long> ex, const Real& tau, Rational lo, Rational hi,
                    const Rational& w, int bits, std::vector<std::pair<Rational, Rational>>& out) {
  if (hi < lo) return;
  const int s_lo = compare(Real(branch_rational(br, lo, ex)), tau, bits);
  const int s_hi = compare(Real(branch_rational(br, hi, ex)), tau, bits);
  if (s_lo == 0) {
    out.emplace_back(lo, lo);
    return;
  }
  if (s_hi == 0) {
    out.emplace_back(hi, hi);
    return;
  }
  if (s_lo == s_hi) return;
  while (hi - lo > w) {
    const Rational mid = (lo + hi) / 2;
    const int s_mid = compare(Real(branch_rational(br, mid, ex)), tau, bits);
    if (s_mid == 0) {
      out.emplace_back(mid, mid);
      return;
    }
    (s_mid == s_lo ? lo : hi) = mid;
  }
  out.emplace_back(lo, hi);
}

Crossing monomial_root(const Real& base, long degree, int bits) {
  Crossing c;
  const Real root = base.pow(ratio(1, degree));
  const Interval iv = root.enclose(bits + 64);
  c.t_lo = iv.lower_rational();
  c.t_hi = iv.upper_rational();
  c.t_exact = root;
  if (root.is_exact()) {
    c.t_exact_text = root.to_string();
  } else if (base.is_exact()) {
    c.t_exact_text = "(" + base.exact()->to_string() + ")^(1/" + std::to_string(degree) + ")";
  }
  if (base.is_exact()) {
    c.root_base = *base.exact();
    c.root_degree = degree;
  }
  return c;
}

bool same_root(const Crossing& x, const Crossing& y, int bits) {
  if (x.root_base && y.root_base)
    return x.root_base->pow(y.root_degree) == y.root_base->pow(x.root_degree);
  if (x.t_lo == x.t_hi && y.t_lo == y.t_hi) return x.t_lo == y.t_lo;
  (void)bits;
  return brackets_meet(x.t_lo, x.t_hi, y.t_lo, y.t_hi);
}

}  // namespace

std::vector<CrossingPoint> d_rho_crossings(const Scenario& s, const Real& rho, const Rational& t_min,
                                           const Rational& t_max, const BifurcationOptions& o) {
  if (t_min <= 0 || t_max < t_min) throw Error(ErrorCode::InvalidInput, "need 0 < t_min <= t_max");
  std::vector<CrossingPoint> points;
  if (!s.projection) return points;
  const int bits = o.precision_bits;
  const auto ex = s.exponents();
  const auto [p, q] = ex;
  const Real tau_max = rho / four_pi_sq();
  const Rational bound =
      upper_bound(tau_max, bits) * (rational_pow(t_min, -p) + rational_pow(t_max, q));
  const auto branches = flat_branches(s, bound, o);
  const Rational width = (t_max - t_min) / rational_pow(Rational(2), o.bisection_bits + 24);
  const Real lo_r(t_min), hi_r(t_max);

  std::vector<Crossing> all;
  const auto& closed = s.closed.spectrum.entries;
  const std::size_t n = closed_count_below(s, rho, bits);
  for (std::size_t j = 0; j < n; ++j) {
    const Real tau = (rho - closed[j].eigenvalue) / four_pi_sq();
    for (const auto& br : branches) {
      if (br.a == 0 && br.b == 0) continue;
      std::vector<Crossing> found;
      if (br.b == 0) {
        found.push_back(monomial_root(tau / Real(br.a), p, bits));
      } else if (br.a == 0) {
        found.push_back(monomial_root(Real(br.b) / tau, q, bits));
      } else {
        // a t^p + b t^-q has a single minimum at t_m^(p+q) = q b / (p a).
        const Real tm = Real(ratio(q, p) * br.b / br.a).pow(ratio(1, p + q));
        const Interval tm_iv = tm.enclose(bits + 64);
        const Rational tm_lo = tm_iv.lower_rational(), tm_hi = tm_iv.upper_rational();
        std::vector<std::pair<Rational, Rational>> brackets;
        const auto fmin = try_compare(branch_value(br, tm, ex), tau * four_pi_sq(), bits);
        if (fmin && *fmin > 0) continue;
        if (fmin && *fmin < 0) {
          monotone_roots(br, ex, tau, t_min, std::min(t_max, tm_lo), width, bits, brackets);
          monotone_roots(br, ex, tau, std::max(t_min, tm_hi), t_max, width, bits, brackets);
        }
        if (brackets.empty() && (!fmin || *fmin <= 0) && !(tm_hi < t_min) && !(t_max < tm_lo))
          brackets.emplace_back(tm_lo, tm_hi);
        for (auto& [a, b] : brackets) {
          Crossing c;
          c.t_lo = a;
          c.t_hi = b;
          if (a == b) {
            c.t_exact = Real(a);
            c.t_exact_text = to_string(a);
          }
          found.push_back(std::move(c));
        }
      }
      for (auto& c : found) {
        if (c.t_exact) {
          if (compare(*c.t_exact, lo_r, bits) < 0 || compare(*c.t_exact, hi_r, bits) > 0) continue;
        } else if (c.t_hi < t_min || t_max < c.t_lo) {
          continue;
        }
        c.closed_entry = j;
        c.branch = br;
        c.multiplicity = closed[j].multiplicity * br.multiplicity;
        all.push_back(std::move(c));
      }
    }
  }
  std::sort(all.begin(), all.end(), [](const Crossing& x, const Crossing& y) { return x.t_lo < y.t_lo; });
  for (auto& c : all) {
    CrossingPoint* hit = nullptr;
    for (auto it = points.rbegin(); it != points.rend(); ++it) {
      if (it->t_hi < c.t_lo && !same_root(it->members.front(), c, bits)) break;
      if (same_root(it->members.front(), c, bits)) {
        hit = &*it;
        break;
      }
    }
    if (!hit) {
      points.push_back({c.t_lo, c.t_hi, c.t_exact, c.t_exact_text, {}});
      hit = &points.back();
    }
    hit->t_lo = std::min(hit->t_lo, c.t_lo);
    hit->t_hi = std::max(hit->t_hi, c.t_hi);
    hit->members.push_back(std::move(c));
  }
  return points;
}

ScanReport scan(const Scenario& s, const Rational& t_min, const Rational& t_max, long steps,
                const BifurcationOptions& o) {
  if (t_min <= 0 || t_max <= t_min) throw Error(ErrorCode::InvalidInput, "need 0 < t_min < t_max");
  if (steps < 2) throw Error(ErrorCode::InvalidInput, "need at least two grid points");
  const int bits = o.precision_bits;
  const Real rho = s.threshold();

  std::vector<Rational> uniform(static_cast<std::size_t>(steps));
  for (long i = 0; i < steps; ++i) uniform[i] = t_min + (t_max - t_min) * ratio(i, steps - 1);
  std::vector<long> values(uniform.size());
  parallel_for(uniform.size(), o.threads, [&](std::size_t i) { values[i] = index_at(s, uniform[i], o).index; });

  ScanReport report;
  std::map<Rational, long> index;
  for (std::size_t i = 0; i < uniform.size(); ++i) {
    index[uniform[i]] = values[i];
    report.grid.emplace_back(uniform[i], values[i]);
  }

  const auto points = d_rho_crossings(s, rho, t_min, t_max, o);
  auto points_in = [&](const Rational& l, const Rational& r) {
    std::vector<std::size_t> in;
    for (std::size_t k = 0; k < points.size(); ++k)
      if (brackets_meet(points[k].t_lo, points[k].t_hi, l, r)) in.push_back(k);
    return in;
  };

  std::size_t extra = 0;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<Rational> splits;
    for (auto it = index.begin(); std::next(it) != index.end(); ++it) {
      if (points_in(it->first, std::next(it)->first).size() > 1) splits.push_back((it->first + std::next(it)->first) / 2);
    }
    if (splits.empty()) break;
    if (extra + splits.size() > o.refine_budget)
      throw Error(ErrorCode::GridTooCoarse, "could not separate crossings within " +
                                                std::to_string(o.refine_budget) + " refinement points");
    std::vector<long> split_values(splits.size());
    parallel_for(splits.size(), o.threads, [&](std::size_t i) { split_values[i] = index_at(s, splits[i], o).index; });
    for (std::size_t i = 0; i < splits.size(); ++i) index[splits[i]] = split_values[i];
    extra += splits.size();
    changed = true;
  }

  const Rational width = (t_max - t_min) / rational_pow(Rational(2), o.bisection_bits);
  std::vector<std::pair<Rational, Rational>> cells;
  for (auto it = index.begin(); std::next(it) != index.end(); ++it) cells.emplace_back(it->first, std::next(it)->first);

  std::vector<std::optional<Instant>> found(cells.size());
  std::vector<std::string> cell_warning(cells.size());
  parallel_for(cells.size(), o.threads, [&](std::size_t c) {
    Rational lo = cells[c].first, hi = cells[c].second;
    const long il = index.at(lo), ir = index.at(hi);
    const auto in = points_in(lo, hi);
    if (il == ir) {
      if (!in.empty())
        cell_warning[c] = "crossing near t=" + std::to_string(to_double(points[in[0]].t_lo)) + " leaves the index unchanged";
      return;
    }
    while (hi - lo > width) {
      const Rational mid = (lo + hi) / 2;
      const long im = index_at(s, mid, o).index;
      if (im == il) {
        lo = mid;
      } else if (im == ir) {
        hi = mid;
      } else {
        lo = hi = mid;
        break;
      }
    }
    Instant inst;
    inst.t_lo = lo;
    inst.t_hi = hi;
    inst.jump = il - ir;
    if (in.size() == 1 && !points[in[0]].t_exact_text.empty()) inst.t_exact = points[in[0]].t_exact_text;
    if (in.empty()) cell_warning[c] = "index jump without a certified crossing near t=" + std::to_string(to_double(lo));
    inst.condition_a = in.size() == 1 && condition_a_check(s, Real(lo), o).holds &&
                       condition_a_check(s, Real(hi), o).holds;
    found[c] = inst;
  });
  for (std::size_t c = 0; c < cells.size(); ++c) {
    if (found[c]) report.instants.push_back(*found[c]);
    if (!cell_warning[c].empty()) report.warnings.push_back(cell_warning[c]);
  }
  if (s.end == CollapseEnd::Zero) std::reverse(report.instants.begin(), report.instants.end());

  auto& acc = report.accumulation;
  std::vector<long> toward(values.begin(), values.end());
  if (s.end == CollapseEnd::Zero) std::reverse(toward.begin(), toward.end());
  acc.index_at_start = toward.front();
  acc.index_at_end = toward.back();
  for (std::size_t i = 1; i < toward.size(); ++i)
    if (toward[i] < toward[i - 1]) acc.monotone_toward_end = false;
  (void)bits;
  return report;
}

long index_lower_bound(const Scenario& s, const Rational& t, const BifurcationOptions& o) {
  const int bits = o.precision_bits;
  const Real rho = s.threshold();
  const std::size_t n = closed_count_below(s, rho, bits);
  if (n == 0) return 0;
  const Real gap = rho - s.closed.spectrum.entries[n - 1].eigenvalue;
  return flat_slice(s, t, gap, o).total_multiplicity();
}

AccumulationEvidence accumulation_diagnostic(const Scenario& s, long k_max, const Rational& start,
                                             const BifurcationOptions& o) {
  if (k_max < 1) throw Error(ErrorCode::InvalidInput, "k_max must be positive");
  if (start <= 0) throw Error(ErrorCode::InvalidInput, "start must be positive");
  if (!s.projection) throw Error(ErrorCode::InvalidInput, "accumulation needs a collapsing family");
  constexpr int kMaxWindows = 64;
  const bool zero = s.end == CollapseEnd::Zero;
  AccumulationEvidence ev;
  Rational edge = start;
  for (int w = 0; static_cast<long>(ev.steps.size()) < k_max; ++w) {
    if (w == kMaxWindows)
      throw Error(ErrorCode::BudgetExhausted, "found " + std::to_string(ev.steps.size()) + " of " +
                                                  std::to_string(k_max) + " instants in " +
                                                  std::to_string(kMaxWindows) + " windows");
    const Rational next = zero ? Rational(edge / 2) : Rational(edge * 2);
    const ScanReport rep = zero ? scan(s, next, edge, 17, o) : scan(s, edge, next, 17, o);
    for (const auto& inst : rep.instants) {
      if (static_cast<long>(ev.steps.size()) >= k_max) break;
      if (!ev.steps.empty() && brackets_meet(ev.steps.back().instant.t_lo, ev.steps.back().instant.t_hi,
                                             inst.t_lo, inst.t_hi))
        continue;
      AccumulationStep st;
      st.instant = inst;
      st.index_above = index_at(s, inst.t_hi, o).index;
      st.index_below = index_at(s, inst.t_lo, o).index;
      const Rational collapse_side = zero ? inst.t_lo : inst.t_hi;
      st.lower_bound = index_lower_bound(s, collapse_side, o);
      st.bound_holds = st.lower_bound <= (zero ? st.index_below : st.index_above);
      if (!st.bound_holds) ev.bounds_hold = false;
      ev.steps.push_back(std::move(st));
    }
    edge = next;
  }
  for (std::size_t k = 0; k < ev.steps.size(); ++k) {
    const auto& st = ev.steps[k];
    const long before = zero ? st.index_above : st.index_below;
    const long after = zero ? st.index_below : st.index_above;
    if (after <= before) ev.strictly_increasing = false;
    if (k > 0) {
      const auto& prev = ev.steps[k - 1];
      if (before != (zero ? prev.index_below : prev.index_above)) ev.strictly_increasing = false;
    }
  }
  return ev;
}

}  // namespace yamflat
