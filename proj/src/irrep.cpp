#include "styre/irrep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace styre {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using std::complex;

MatrixXcd unitarize(const MatrixXcd& m) {
    Eigen::JacobiSVD<MatrixXcd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().adjoint();
}

void fill_character(Irrep& rho) {
    rho.character.clear();
    for (const auto& m : rho.matrices) rho.character.push_back(m.trace());
}

double character_distance(const Irrep& a, const Irrep& b) {
    if (a.dim != b.dim) return 1e9;
    double d = 0.0;
    for (size_t i = 0; i < a.character.size(); ++i)
        d = std::max(d, std::abs(a.character[i] - b.character[i]));
    return d;
}

// chi-norm Schur test: (1/|G|) sum |chi(g)|^2 == 1 for irreducibles.
double character_norm(const Irrep& rho) {
    double s = 0.0;
    for (const auto& c : rho.character) s += std::norm(c);
    return s / rho.group->order;
}

std::vector<Irrep> cyclic_characters(const FiniteGroup& g, int gen) {
    // gen generates g; chi_j(gen^k) = exp(2 pi i j k / n)
    const int n = g.order;
    std::vector<int> power_of(n, -1);
    int cur = 0;
    for (int k = 0; k < n; ++k) {
        power_of[cur] = k;
        cur = g.table[cur][gen];
    }
    std::vector<Irrep> out;
    for (int j = 0; j < n; ++j) {
        Irrep rho;
        rho.group = &g;
        rho.dim = 1;
        rho.matrices.resize(n);
        for (int e = 0; e < n; ++e) {
            double ang = 2.0 * std::numbers::pi * j * power_of[e] / n;
            rho.matrices[e] = MatrixXcd::Constant(1, 1, std::polar(1.0, ang));
        }
        fill_character(rho);
        out.push_back(std::move(rho));
    }
    return out;
}

int find_cyclic_generator(const FiniteGroup& g) {
    for (int x = 0; x < g.order; ++x) {
        int cur = x, ord = 1;
        while (cur != 0) {
            cur = g.table[cur][x];
            ++ord;
        }
        if (ord == g.order) return x;
    }
    return -1;
}

// Decompose the left regular representation by diagonalizing a
// group-averaged random Hermitian matrix; each eigenvalue cluster spans an
// irreducible invariant subspace for a generic seed matrix.
std::vector<Irrep> regular_decomposition(const FiniteGroup& g, std::mt19937_64& rng) {
    const int n = g.order;
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = complex<double>(gauss(rng), gauss(rng));
    h = (h + h.adjoint().eval()) / 2.0;

    // averaged = (1/|G|) sum_g L(g) h L(g)^*, with L(g) e_x = e_{gx}
    MatrixXcd averaged = MatrixXcd::Zero(n, n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                averaged(g.table[a][i], g.table[a][j]) += h(i, j);
    averaged /= n;

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(averaged);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();

    std::vector<Irrep> raw;
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && vals(end) - vals(end - 1) < 1e-7) ++end;
        MatrixXcd q = vecs.block(0, start, n, end - start);
        Irrep rho;
        rho.group = &g;
        rho.dim = end - start;
        rho.matrices.resize(n);
        for (int a = 0; a < n; ++a) {
            MatrixXcd la_q(n, rho.dim);  // L(a) * q
            for (int x = 0; x < n; ++x) la_q.row(g.table[a][x]) = q.row(x);
            MatrixXcd m = q.adjoint() * la_q;
            // invariance of the subspace under L(a)
            if ((la_q - q * m).norm() > 1e-7 * std::sqrt((double)n))
                throw std::runtime_error("regular decomposition: eigenvalue clusters merged blocks");
            rho.matrices[a] = unitarize(m);
        }
        fill_character(rho);
        if (std::abs(character_norm(rho) - 1.0) > 1e-8)
            throw std::runtime_error("regular decomposition: block failed the Schur test");
        raw.push_back(std::move(rho));
        start = end;
    }
    return raw;
}

}  // namespace

void validate_irrep(const Irrep& rho) {
    const FiniteGroup& g = *rho.group;
    if (!rho.matrices[0].isIdentity(1e-10))
        throw std::runtime_error("irrep: rho(e) is not the identity");
    for (int a = 0; a < g.order; ++a) {
        if (!(rho.matrices[a] * rho.matrices[a].adjoint()).isIdentity(1e-10))
            throw std::runtime_error("irrep: matrix is not unitary");
        for (int b = 0; b < g.order; ++b)
            if ((rho.matrices[g.table[a][b]] - rho.matrices[a] * rho.matrices[b]).norm() > 1e-8)
                throw std::runtime_error("irrep: homomorphism violated");
    }
    if (std::abs(character_norm(rho) - 1.0) > 1e-8)
        throw std::runtime_error("irrep: reducible (Schur character test)");
}

std::vector<Irrep> irreps_of(const FiniteGroup& g) {
    std::vector<Irrep> reps;
    int gen = find_cyclic_generator(g);
    if (gen >= 0) {
        reps = cyclic_characters(g, gen);
    } else {
        std::mt19937_64 rng(0x1e9ea7u);
        std::vector<Irrep> raw;
        for (int attempt = 0; attempt < 8; ++attempt) {
            try {
                raw = regular_decomposition(g, rng);
                break;
            } catch (const std::runtime_error&) {
                if (attempt == 7) throw;
            }
        }
        for (auto& rho : raw) {
            bool dup = false;
            for (const auto& kept : reps)
                if (character_distance(rho, kept) < 1e-6) {
                    dup = true;
                    break;
                }
            if (!dup) reps.push_back(std::move(rho));
        }
    }

    int dim2 = 0;
    for (const auto& r : reps) dim2 += r.dim * r.dim;
    if (dim2 != g.order)
        throw std::runtime_error("irrep list incomplete: sum dim^2 != |G|");
    for (const auto& r : reps) validate_irrep(r);

    // stable ordering: (dim, lexicographic character)
    auto char_key = [](const Irrep& r) {
        std::vector<std::pair<long long, long long>> k;
        for (auto c : r.character)
            k.emplace_back(std::llround(c.real() * 1e6), std::llround(c.imag() * 1e6));
        return k;
    };
    auto is_trivial = [](const Irrep& r) {
        for (auto c : r.character)
            if (std::abs(c - complex<double>(1, 0)) > 1e-8) return false;
        return true;
    };
    std::sort(reps.begin(), reps.end(), [&](const Irrep& a, const Irrep& b) {
        if (is_trivial(a) != is_trivial(b)) return is_trivial(a);
        if (a.dim != b.dim) return a.dim < b.dim;
        return char_key(a) < char_key(b);
    });
    for (size_t i = 0; i < reps.size(); ++i)
        reps[i].name = "rho_" + std::to_string(i) + " (dim " + std::to_string(reps[i].dim) + ")";
    return reps;
}

Subgroup joint_kernel(const FiniteGroup& g, const std::vector<const Irrep*>& reps) {
    Subgroup h;
    h.parent = &g;
    for (int x = 0; x < g.order; ++x) {
        bool in = true;
        for (const Irrep* r : reps)
            if (std::abs(r->character[x] - complex<double>(r->dim, 0)) > 1e-8) {
                in = false;
                break;
            }
        if (in) h.members.push_back(x);
    }
    return h;
}

Subgroup joint_kernel(const FiniteGroup& g, const std::vector<Irrep>& reps) {
    std::vector<const Irrep*> ptrs;
    for (const auto& r : reps) ptrs.push_back(&r);
    return joint_kernel(g, ptrs);
}

}  // namespace styre
