#include "styre/group.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace styre {

int FiniteGroup::label_index(const std::string& label) const {
    for (int i = 0; i < order; ++i)
        if (labels[i] == label) return i;
    throw std::invalid_argument("unknown element label: " + label);
}

bool FiniteGroup::is_abelian() const {
    for (int a = 0; a < order; ++a)
        for (int b = a + 1; b < order; ++b)
            if (table[a][b] != table[b][a]) return false;
    return true;
}

bool Subgroup::contains(int g) const {
    return std::binary_search(members.begin(), members.end(), g);
}

std::vector<std::string> Subgroup::member_labels() const {
    std::vector<std::string> out;
    out.reserve(members.size());
    for (int m : members) out.push_back(parent->labels[m]);
    return out;
}

void validate_group(const FiniteGroup& g) {
    const int n = g.order;
    if (n <= 0) throw std::invalid_argument("group order must be positive");
    if ((int)g.labels.size() != n || (int)g.table.size() != n || (int)g.inverse.size() != n)
        throw std::invalid_argument("group field sizes inconsistent with order");
    for (int i = 0; i < n; ++i)
        if ((int)g.table[i].size() != n)
            throw std::invalid_argument("multiplication table is not square");
    // identity row/column
    for (int i = 0; i < n; ++i)
        if (g.table[0][i] != i || g.table[i][0] != i)
            throw std::invalid_argument("element 0 is not an identity");
    // Latin square
    for (int i = 0; i < n; ++i) {
        std::vector<bool> row(n, false), col(n, false);
        for (int j = 0; j < n; ++j) {
            int r = g.table[i][j], c = g.table[j][i];
            if (r < 0 || r >= n || c < 0 || c >= n)
                throw std::invalid_argument("table entry out of range");
            if (row[r] || col[c])
                throw std::invalid_argument("table is not a Latin square");
            row[r] = col[c] = true;
        }
    }
    // inverses
    for (int i = 0; i < n; ++i)
        if (g.table[i][g.inverse[i]] != 0 || g.table[g.inverse[i]][i] != 0)
            throw std::invalid_argument("inverse list is wrong");
    // associativity: exhaustive up to order 64, sampled above
    auto check = [&](int a, int b, int c) {
        if (g.table[g.table[a][b]][c] != g.table[a][g.table[b][c]])
            throw std::invalid_argument("multiplication table is not associative");
    };
    if (n <= 64) {
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) check(a, b, c);
    } else {
        std::mt19937_64 rng(0x5eedu);
        std::uniform_int_distribution<int> d(0, n - 1);
        for (int t = 0; t < 200000; ++t) check(d(rng), d(rng), d(rng));
    }
}

static std::vector<int> inverses_from_table(const std::vector<std::vector<int>>& table) {
    const int n = (int)table.size();
    std::vector<int> inv(n, -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (table[i][j] == 0) inv[i] = j;
    return inv;
}

FiniteGroup make_cyclic(int n) {
    if (n < 1) throw std::invalid_argument("cyclic(n) needs n >= 1");
    FiniteGroup g;
    g.order = n;
    for (int i = 0; i < n; ++i) g.labels.push_back(std::to_string(i));
    g.table.assign(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.table[i][j] = (i + j) % n;
    g.inverse = inverses_from_table(g.table);
    validate_group(g);
    return g;
}

namespace {

using Perm = std::vector<int>;  // one-line notation on {0..n-1}

// Products compose left to right: (a*b)(x) = b(a(x)).
Perm perm_mul(const Perm& a, const Perm& b) {
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
    return r;
}

std::string cycle_label(const Perm& p) {
    const int n = (int)p.size();
    std::vector<bool> seen(n, false);
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (seen[i] || p[i] == i) continue;
        out += '(';
        int j = i;
        while (!seen[j]) {
            seen[j] = true;
            out += std::to_string(j + 1);
            j = p[j];
        }
        out += ')';
    }
    return out.empty() ? "e" : out;
}

int moved_count(const Perm& p) {
    int m = 0;
    for (size_t i = 0; i < p.size(); ++i)
        if (p[i] != (int)i) ++m;
    return m;
}

// Canonical listing: identity first, then by number of moved points;
// transpositions (a b) ordered by (b-a, a), other classes by label.
// This reproduces the conventional S3 listing e,(12),(23),(13),(123),(132).
bool perm_order_less(const Perm& a, const Perm& b) {
    int ma = moved_count(a), mb = moved_count(b);
    if (ma != mb) return ma < mb;
    if (ma == 2) {
        int alo = -1, ahi = -1, blo = -1, bhi = -1;
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] != (int)i) (alo < 0 ? alo : ahi) = (int)i;
            if (b[i] != (int)i) (blo < 0 ? blo : bhi) = (int)i;
        }
        auto ka = std::pair<int, int>(ahi - alo, alo);
        auto kb = std::pair<int, int>(bhi - blo, blo);
        if (ka != kb) return ka < kb;
    }
    return cycle_label(a) < cycle_label(b);
}

}  // namespace

FiniteGroup make_symmetric(int n) {
    if (n < 1 || n > 5) throw std::invalid_argument("symmetric(n) supports 1 <= n <= 5");
    Perm id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    std::vector<Perm> perms;
    Perm p = id;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::sort(perms.begin(), perms.end(), perm_order_less);

    FiniteGroup g;
    g.order = (int)perms.size();
    g.table.assign(g.order, std::vector<int>(g.order));
    for (auto& q : perms) g.labels.push_back(cycle_label(q));
    auto index_of = [&](const Perm& q) {
        return (int)(std::find(perms.begin(), perms.end(), q) - perms.begin());
    };
    for (int i = 0; i < g.order; ++i)
        for (int j = 0; j < g.order; ++j)
            g.table[i][j] = index_of(perm_mul(perms[i], perms[j]));
    g.inverse = inverses_from_table(g.table);
    validate_group(g);
    return g;
}

FiniteGroup make_dihedral(int n) {
    if (n < 2) throw std::invalid_argument("dihedral(n) needs n >= 2");
    // elements: r^a (flip=0) then s r^a (flip=1); s r^a s = r^-a
    const int order = 2 * n;
    auto idx = [&](int flip, int a) { return flip * n + ((a % n) + n) % n; };
    FiniteGroup g;
    g.order = order;
    for (int a = 0; a < n; ++a)
        g.labels.push_back(a == 0 ? "e" : (a == 1 ? "r" : "r" + std::to_string(a)));
    for (int a = 0; a < n; ++a)
        g.labels.push_back(a == 0 ? "s" : (a == 1 ? "sr" : "sr" + std::to_string(a)));
    g.table.assign(order, std::vector<int>(order));
    for (int f1 = 0; f1 < 2; ++f1)
        for (int a = 0; a < n; ++a)
            for (int f2 = 0; f2 < 2; ++f2)
                for (int b = 0; b < n; ++b) {
                    // (s^f1 r^a)(s^f2 r^b) = s^(f1^f2) r^(b + (f2 ? -a : a))
                    int f = f1 ^ f2;
                    int e = f2 ? (b - a) : (b + a);
                    g.table[idx(f1, a)][idx(f2, b)] = idx(f, e);
                }
    g.inverse = inverses_from_table(g.table);
    validate_group(g);
    return g;
}

FiniteGroup make_product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    g.order = a.order * b.order;
    auto idx = [&](int i, int j) { return i * b.order + j; };
    for (int i = 0; i < a.order; ++i)
        for (int j = 0; j < b.order; ++j)
            g.labels.push_back("(" + a.labels[i] + "," + b.labels[j] + ")");
    g.table.assign(g.order, std::vector<int>(g.order));
    for (int i1 = 0; i1 < a.order; ++i1)
        for (int j1 = 0; j1 < b.order; ++j1)
            for (int i2 = 0; i2 < a.order; ++i2)
                for (int j2 = 0; j2 < b.order; ++j2)
                    g.table[idx(i1, j1)][idx(i2, j2)] =
                        idx(a.table[i1][i2], b.table[j1][j2]);
    g.inverse = inverses_from_table(g.table);
    validate_group(g);
    return g;
}

FiniteGroup make_from_table(std::vector<std::vector<int>> table,
                            std::vector<std::string> labels) {
    FiniteGroup g;
    g.order = (int)table.size();
    g.table = std::move(table);
    if (labels.empty())
        for (int i = 0; i < g.order; ++i) labels.push_back("g" + std::to_string(i));
    g.labels = std::move(labels);
    g.inverse = inverses_from_table(g.table);
    for (int i = 0; i < g.order; ++i)
        if (g.inverse[i] < 0) throw std::invalid_argument("element without inverse");
    validate_group(g);
    return g;
}

Subgroup subgroup_generated(const FiniteGroup& g, const std::vector<int>& gens) {
    std::set<int> closed{0};
    std::vector<int> todo{0};
    for (int x : gens) {
        if (x < 0 || x >= g.order) throw std::invalid_argument("generator index out of range");
        if (closed.insert(x).second) todo.push_back(x);
    }
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        std::vector<int> cur(closed.begin(), closed.end());
        for (int y : cur) {
            for (int z : {g.table[x][y], g.table[y][x], g.inverse[x]})
                if (closed.insert(z).second) todo.push_back(z);
        }
    }
    Subgroup h;
    h.parent = &g;
    h.members.assign(closed.begin(), closed.end());
    return h;
}

Subgroup whole_group(const FiniteGroup& g) {
    Subgroup h;
    h.parent = &g;
    h.members.resize(g.order);
    for (int i = 0; i < g.order; ++i) h.members[i] = i;
    return h;
}

Subgroup trivial_subgroup(const FiniteGroup& g) {
    Subgroup h;
    h.parent = &g;
    h.members = {0};
    return h;
}

bool is_normal(const FiniteGroup& g, const Subgroup& h) {
    for (int x = 0; x < g.order; ++x)
        for (int m : h.members)
            if (!h.contains(g.table[g.table[x][m]][g.inverse[x]])) return false;
    return true;
}

Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int by) {
    std::set<int> out;
    for (int m : h.members) out.insert(g.table[g.table[by][m]][g.inverse[by]]);
    Subgroup c;
    c.parent = &g;
    c.members.assign(out.begin(), out.end());
    return c;
}

}  // namespace styre
