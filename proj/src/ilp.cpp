#include "paintshop/ilp.hpp"

#include <sstream>

namespace paintshop {

namespace {

// Linear expression sum(coef * var) + constant; keeps first-seen variable order
// so the emitted text is byte-stable.
struct Expr {
  std::vector<LinearTerm> terms;
  long long constant = 0;

  Expr() = default;
  Expr(long long c) : constant(c) {}  // NOLINT(google-explicit-constructor)
  static Expr var(std::string name, long long coef = 1) {
    Expr e;
    e.terms.push_back({std::move(name), coef});
    return e;
  }

  Expr& operator+=(const Expr& o) {
    for (const auto& t : o.terms) {
      bool merged = false;
      for (auto& mine : terms) {
        if (mine.var == t.var) {
          mine.coef += t.coef;
          merged = true;
          break;
        }
      }
      if (!merged) terms.push_back(t);
    }
    constant += o.constant;
    return *this;
  }
  Expr& operator*=(long long k) {
    for (auto& t : terms) t.coef *= k;
    constant *= k;
    return *this;
  }
};

Expr operator+(Expr a, const Expr& b) { return a += b; }
Expr operator-(Expr a, Expr b) { return a += (b *= -1); }
Expr operator*(long long k, Expr a) { return a *= k; }

std::string idx(std::initializer_list<int> parts) {
  std::string s;
  for (int p : parts) s += "_" + std::to_string(p);
  return s;
}

class Builder {
 public:
  Builder(const Instance& inst, const IlpOptions& options)
      : n_(static_cast<int>(inst.upstream.size())),
        lanes_(inst.lanes),
        width_(inst.width),
        colors_(inst.num_colors),
        horizon_(2 * n_),
        options_(options),
        upstream_(inst.upstream) {}

  IlpModel build() {
    declare_variables();
    objective();
    operations();
    initial_values();
    upstream_dynamics();
    buffer_dynamics();
    validity();
    current_color();
    occupancy();
    return std::move(model_);
  }

 private:
  static std::string x(int t, int i) { return "x" + idx({t, i}); }
  static std::string y(int t, int i) { return "y" + idx({t, i}); }
  static std::string z(int t) { return "z" + idx({t}); }
  static std::string b(int t, int i, int j) { return "B" + idx({t, i, j}); }
  static std::string e(int t, int n) { return "e" + idx({t, n}); }
  static std::string p(int t) { return "p" + idx({t}); }
  static std::string u(int t, int i, int j) { return "u" + idx({t, i, j}); }
  static std::string w(int t) { return "w" + idx({t}); }

  Expr sum_x(int t) const {
    Expr s;
    for (int i = 1; i <= lanes_; ++i) s += Expr::var(x(t, i));
    return s;
  }
  Expr sum_y(int t) const {
    Expr s;
    for (int i = 1; i <= lanes_; ++i) s += Expr::var(y(t, i));
    return s;
  }
  // 1 iff slot j of lane i is the rightmost empty slot at time t.
  Expr rightmost_empty(int t, int i, int j) const {
    if (j == width_) return Expr(1) - Expr::var(u(t, i, j));
    return Expr::var(u(t, i, j + 1)) - Expr::var(u(t, i, j));
  }

  void declare(const std::string& name, const std::string& family, long long lo, long long hi, bool binary) {
    model_.variables.push_back({name, family, lo, hi, binary});
    ++model_.variable_counts[family];
  }

  void row(const std::string& family, const std::string& name, const Expr& lhs, Sense sense, const Expr& rhs) {
    Expr diff = lhs - rhs;
    LinearRow r{name, {}, sense, -diff.constant};
    for (auto& t : diff.terms) {
      if (t.coef != 0) r.terms.push_back(std::move(t));
    }
    model_.rows.push_back(std::move(r));
    ++model_.constraint_counts[family];
  }

  // lo <= expr <= hi written as two rows.
  void between(const std::string& family, const std::string& suffix, const Expr& lo, const Expr& expr,
               const Expr& hi) {
    row(family, family + "_lo" + suffix, expr, Sense::GreaterEqual, lo);
    row(family, family + "_hi" + suffix, expr, Sense::LessEqual, hi);
  }

  // Implication "a == 0 => b == 0" for bounded b in [-C, C]:  -C a <= b <= C a.
  void implies_zero(const std::string& family, const std::string& suffix, const Expr& a, const Expr& b) {
    const long long c = colors_;
    between(family, suffix, -c * a, b, c * a);
  }

  void declare_variables() {
    const long long c = colors_;
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i) declare(x(t, i), "x", 0, 1, true);
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i) declare(y(t, i), "y", 0, 1, true);
    for (int t = 1; t <= horizon_; ++t) declare(z(t), "z", 0, 1, true);
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i)
        for (int j = 1; j <= width_; ++j) declare(b(t, i, j), "B", 0, c, false);
    for (int t = 1; t <= horizon_; ++t)
      for (int n = 1; n <= n_; ++n) declare(e(t, n), "e", 0, c, false);
    for (int t = 1; t <= horizon_; ++t) declare(p(t), "p", 0, c, false);
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i)
        for (int j = 1; j <= width_; ++j) declare(u(t, i, j), "u", 0, 1, true);
    if (options_.aligned) {
      for (int t = 1; t <= horizon_; ++t) declare(w(t), "w", 0, 1, true);
    }
  }

  void objective() {
    for (int t = 1; t < horizon_; ++t) model_.objective.push_back({z(t), 1});
  }

  void operations() {
    for (int t = 1; t <= horizon_; ++t) row("one_op", "one_op" + idx({t}), sum_x(t) + sum_y(t), Sense::Equal, 1);
  }

  void initial_values() {
    for (int n = 1; n <= n_; ++n) {
      row("seq_init", "seq_init" + idx({n}), Expr::var(e(1, n)), Sense::Equal, upstream_[static_cast<std::size_t>(n - 1)]);
    }
    for (int i = 1; i <= lanes_; ++i)
      for (int j = 1; j <= width_; ++j) row("buf_init", "buf_init" + idx({i, j}), Expr::var(b(1, i, j)), Sense::Equal, 0);
    row("color_init", "color_init", Expr::var(p(1)), Sense::Equal, 0);
  }

  void upstream_dynamics() {
    const long long c = colors_;
    for (int t = 1; t < horizon_; ++t) {
      // a store shifts the upstream sequence by one position
      for (int n = 1; n < n_; ++n) {
        implies_zero("seq_shift", idx({t, n}), Expr(1) - sum_x(t), Expr::var(e(t + 1, n)) - Expr::var(e(t, n + 1)));
      }
      row("seq_tail", "seq_tail" + idx({t}), Expr::var(e(t + 1, n_)), Sense::LessEqual, c * (Expr(1) - sum_x(t)));
      // otherwise it stays put
      for (int n = 1; n <= n_; ++n) {
        implies_zero("seq_hold", idx({t, n}), sum_x(t), Expr::var(e(t + 1, n)) - Expr::var(e(t, n)));
      }
    }
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i) {
        // no store once the upstream sequence is exhausted
        row("no_store", "no_store" + idx({t, i}), Expr::var(x(t, i)), Sense::LessEqual, Expr::var(e(t, 1)));
      }
  }

  void buffer_dynamics() {
    const long long c = colors_;
    for (int t = 1; t < horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i) {
        const Expr xi = Expr::var(x(t, i));
        const Expr yi = Expr::var(y(t, i));
        for (int j = 1; j <= width_; ++j) {
          const Expr next = Expr::var(b(t + 1, i, j));
          const Expr now = Expr::var(b(t, i, j));
          implies_zero("lane_hold", idx({t, i, j}), xi + yi, next - now);
          const Expr r = rightmost_empty(t, i, j);
          implies_zero("store_place", idx({t, i, j}), (Expr(1) - xi) + (Expr(1) - r), next - Expr::var(e(t, 1)));
          implies_zero("store_keep", idx({t, i, j}), (Expr(1) - xi) + r, next - now);
        }
        row("retr_clear", "retr_clear" + idx({t, i}), Expr::var(b(t + 1, i, 1)), Sense::LessEqual,
            c * (Expr(1) - yi));
        for (int j = 1; j < width_; ++j) {
          implies_zero("retr_shift", idx({t, i, j}), Expr(1) - yi,
                       Expr::var(b(t + 1, i, j + 1)) - Expr::var(b(t, i, j)));
        }
      }
  }

  void validity() {
    const long long c = colors_;
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i) {
        row("valid_store", "valid_store" + idx({t, i}), Expr::var(b(t, i, 1)), Sense::LessEqual,
            c * (Expr(1) - Expr::var(x(t, i))));
        row("valid_retr", "valid_retr" + idx({t, i}), Expr::var(b(t, i, width_)), Sense::GreaterEqual,
            Expr::var(y(t, i)));
      }
  }

  void current_color() {
    const long long c = colors_;
    for (int t = 2; t <= horizon_; ++t) {
      implies_zero("color_hold", idx({t}), sum_y(t), Expr::var(p(t)) - Expr::var(p(t - 1)));
      for (int i = 1; i <= lanes_; ++i) {
        implies_zero("color_set", idx({t, i}), Expr(1) - Expr::var(y(t, i)),
                     Expr::var(p(t)) - Expr::var(b(t, i, width_)));
      }
    }
    for (int t = 1; t < horizon_; ++t) {
      Expr allowance = c * Expr::var(z(t));
      if (options_.aligned) allowance += c * (Expr(1) - Expr::var(w(t)));
      const Expr delta = Expr::var(p(t + 1)) - Expr::var(p(t));
      row("change", "change_up" + idx({t}), delta, Sense::LessEqual, allowance);
      row("change", "change_down" + idx({t}), -1 * delta, Sense::LessEqual, allowance);
    }
    if (options_.aligned) {
      for (int t = 1; t <= horizon_; ++t) {
        between("painted", idx({t}), Expr::var(w(t)), Expr::var(p(t)), c * Expr::var(w(t)));
      }
    }
  }

  void occupancy() {
    const long long c = colors_;
    for (int t = 1; t <= horizon_; ++t)
      for (int i = 1; i <= lanes_; ++i)
        for (int j = 1; j <= width_; ++j) {
          between("occupied", idx({t, i, j}), Expr::var(u(t, i, j)), Expr::var(b(t, i, j)), c * Expr::var(u(t, i, j)));
          if (j < width_) {
            row("packing", "packing" + idx({t, i, j}), Expr::var(u(t, i, j)), Sense::LessEqual,
                Expr::var(u(t, i, j + 1)));
          }
        }
  }

  int n_;
  int lanes_;
  int width_;
  int colors_;
  int horizon_;
  IlpOptions options_;
  const std::vector<Color>& upstream_;
  IlpModel model_;
};

class LineWriter {
 public:
  explicit LineWriter(std::ostringstream& out) : out_(out) {}
  void token(const std::string& t) {
    if (length_ + t.size() + 1 > kMaxLine) {
      out_ << "\n   ";
      length_ = 3;
    }
    out_ << ' ' << t;
    length_ += t.size() + 1;
  }
  void start(const std::string& head) {
    out_ << head;
    length_ = head.size();
  }
  void end() { out_ << '\n'; }

 private:
  static constexpr std::size_t kMaxLine = 200;
  std::ostringstream& out_;
  std::size_t length_ = 0;
};

void write_terms(LineWriter& lw, const std::vector<LinearTerm>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    const long long mag = t.coef < 0 ? -t.coef : t.coef;
    std::string tok;
    if (t.coef < 0) {
      tok = "-";
    } else if (!first) {
      tok = "+";
    }
    if (!tok.empty()) lw.token(tok);
    if (mag != 1) lw.token(std::to_string(mag));
    lw.token(t.var);
    first = false;
  }
  if (terms.empty()) lw.token("0");
}

}  // namespace

std::string IlpModel::to_lp() const {
  std::ostringstream out;
  LineWriter lw(out);
  out << "\\ paintshop flexible buffer resequencing model\n";
  out << "Minimize\n";
  lw.start(" obj:");
  write_terms(lw, objective);
  lw.end();
  out << "Subject To\n";
  for (const auto& r : rows) {
    lw.start(" " + r.name + ":");
    write_terms(lw, r.terms);
    lw.token(r.sense == Sense::LessEqual ? "<=" : r.sense == Sense::GreaterEqual ? ">=" : "=");
    lw.token(std::to_string(r.rhs));
    lw.end();
  }
  out << "Bounds\n";
  for (const auto& v : variables) {
    if (!v.binary) out << ' ' << v.lower << " <= " << v.name << " <= " << v.upper << '\n';
  }
  out << "Binaries\n";
  lw.start("");
  for (const auto& v : variables) {
    if (v.binary) lw.token(v.name);
  }
  lw.end();
  out << "Generals\n";
  lw.start("");
  for (const auto& v : variables) {
    if (!v.binary) lw.token(v.name);
  }
  lw.end();
  out << "End\n";
  return out.str();
}

IlpModel build_ilp(const Instance& instance, const IlpOptions& options) {
  instance.validate();
  if (instance.initial_cars() > 0) throw UnsupportedInitialBuffer();
  return Builder(instance, options).build();
}

std::string export_ilp(const Instance& instance, const IlpOptions& options) {
  return build_ilp(instance, options).to_lp();
}

}  // namespace paintshop
