// pmx: command-line structural analysis of polynomial and rational matrices.
//
// Usage: pmx <command> <input.json> [flags]
//
// Commands: kstruct eigvals zeros poles roots rank regular unimodular smith
//           minindices linearize minreal
//
// Input documents are JSON files carrying a "kind" tag:
//   polymatrix        {"kind":"polymatrix","coeff":[C0,C1,...]}
//                     Ci = matrix (array of rows) holding the coefficient of x^i
//   rationalmatrix    {"kind":"rationalmatrix","num":G,"den":G}
//                     G = grid of entries, each an ascending coefficient list
//   pencil            {"kind":"pencil","M":matrix,"N":matrix}, analyzed as M - x N
//   realization       {"kind":"realization","A":..,"E":..,"B":..,"F":..,"C":..,"G":..,"D":..,"H":..}
//                     missing E defaults to identity, other missing blocks to zero;
//                     realizes R(x) = (C - xG)(xE - A)^{-1}(B - xF) + D - xH
//   polysystemmatrix  {"kind":"polysystemmatrix","T":..,"U":..,"V":..,"W":..}
//                     polynomial blocks of R(x) = V T^{-1} U + W
// Optional document keys "grade", "atol", "rtol" act as defaults; command-line
// flags override them.
//
// Output: human-readable text (default) or machine-readable JSON (--format
// json).  Both carry the same numeric content; numbers are canonicalized to 12
// significant digits and infinity is serialized as the string "inf".  Output
// is deterministic: the same input, flags and seed produce identical bytes.
//
// Exit codes: 0 success, 2 input or usage error, 3 analysis precondition
// violation (e.g. determinant roots of a singular matrix).  Diagnostics go to
// standard error.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmstruct/analysis.hpp"
#include "pmstruct/exact.hpp"

namespace pms = pmstruct;
using J = nlohmann::ordered_json;
using pms::cplx;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Canonical number formatting shared by both output modes.

double canon(double x) {
    if (x == 0.0) return 0.0;  // flushes -0.0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

std::string num_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", canon(x));
    return buf;
}

J jc(const cplx& v) {
    J o = J::object();
    o["re"] = canon(v.real());
    o["im"] = canon(v.imag());
    return o;
}

std::string cplx_str(const cplx& v) {
    const double re = canon(v.real()), im = canon(v.imag());
    if (im == 0.0) return num_str(re);
    std::string s = num_str(re);
    s += im < 0.0 ? "-" : "+";
    s += num_str(std::abs(im));
    s += "i";
    return s;
}

bool cplx_less(const cplx& a, const cplx& b) {
    const double ar = canon(a.real()), br = canon(b.real());
    if (ar != br) return ar < br;
    return canon(a.imag()) < canon(b.imag());
}

template <class T>
std::string int_list_str(const std::vector<T>& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(v[i]);
    }
    return s + "]";
}

// ---------------------------------------------------------------------------
// Input document parsing.

Eigen::MatrixXd parse_matrix(const J& a, const std::string& what) {
    if (!a.is_array() || a.empty() || !a[0].is_array() || a[0].empty())
        throw UsageError(what + ": expected a non-empty array of non-empty rows");
    const auto m = static_cast<Eigen::Index>(a.size());
    const auto n = static_cast<Eigen::Index>(a[0].size());
    Eigen::MatrixXd X(m, n);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& row = a[static_cast<size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
            throw UsageError(what + ": rows differ in length");
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& e = row[static_cast<size_t>(j)];
            if (!e.is_number()) throw UsageError(what + ": entries must be numbers");
            X(i, j) = e.get<double>();
        }
    }
    return X;
}

pms::PolyMatrix<double> parse_polymat(const J& a, const std::string& what) {
    if (!a.is_array() || a.empty())
        throw UsageError(what + ": expected a non-empty array of coefficient matrices");
    std::vector<Eigen::MatrixXd> cs;
    for (size_t i = 0; i < a.size(); ++i)
        cs.push_back(parse_matrix(a[i], what + "[" + std::to_string(i) + "]"));
    return pms::PolyMatrix<double>(std::move(cs));
}

pms::Poly<double> parse_poly(const J& a, const std::string& what) {
    if (!a.is_array()) throw UsageError(what + ": expected a coefficient list");
    std::vector<double> c;
    for (const auto& e : a) {
        if (!e.is_number()) throw UsageError(what + ": coefficients must be numbers");
        c.push_back(e.get<double>());
    }
    return pms::Poly<double>(std::move(c));
}

struct Doc {
    std::string kind;
    std::optional<pms::PolyMatrix<double>> pm;
    std::optional<pms::RationalMatrix<double>> rm;
    std::optional<pms::Pencil<double>> pencil;
    std::optional<pms::PencilRealization<double>> sys;
    bool descriptor_form = false;  // realization given without F/G/H
    std::optional<pms::PolySystemMatrix<double>> spm;
    int grade = -1;
    pms::Tol tol;
};

Doc load_doc(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file: " + path);
    J j;
    try {
        j = J::parse(in);
    } catch (const std::exception& e) {
        throw UsageError(std::string("JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw UsageError("input document needs a string \"kind\" field");

    Doc d;
    d.kind = j["kind"].get<std::string>();
    const auto need = [&](const char* key) -> const J& {
        if (!j.contains(key))
            throw UsageError("kind \"" + d.kind + "\" needs a \"" + key + "\" field");
        return j[key];
    };
    try {
        if (d.kind == "polymatrix") {
            d.pm = parse_polymat(need("coeff"), "coeff");
        } else if (d.kind == "rationalmatrix") {
            const J &nj = need("num"), &dj = need("den");
            if (!nj.is_array() || nj.empty() || !dj.is_array() || dj.size() != nj.size())
                throw UsageError("num/den: expected equal-shaped non-empty grids");
            const size_t p = nj.size();
            const size_t m = nj[0].is_array() ? nj[0].size() : 0;
            if (m == 0) throw UsageError("num: expected a grid of coefficient lists");
            std::vector<std::vector<pms::Poly<double>>> num(p), den(p);
            for (size_t i = 0; i < p; ++i) {
                if (!nj[i].is_array() || nj[i].size() != m || !dj[i].is_array() ||
                    dj[i].size() != m)
                    throw UsageError("num/den: rows differ in length");
                for (size_t k = 0; k < m; ++k) {
                    const std::string at = "(" + std::to_string(i) + "," + std::to_string(k) + ")";
                    num[i].push_back(parse_poly(nj[i][k], "num" + at));
                    den[i].push_back(parse_poly(dj[i][k], "den" + at));
                    if (den[i].back().is_zero())
                        throw UsageError("den" + at + ": zero denominator");
                }
            }
            d.rm = pms::RationalMatrix<double>(std::move(num), std::move(den));
        } else if (d.kind == "pencil") {
            d.pencil = pms::Pencil<double>(parse_matrix(need("M"), "M"), parse_matrix(need("N"), "N"));
        } else if (d.kind == "realization") {
            const auto get = [&](const char* key) -> std::optional<Eigen::MatrixXd> {
                if (!j.contains(key)) return std::nullopt;
                return parse_matrix(j[key], key);
            };
            const auto A = get("A"), B = get("B"), C = get("C");
            if (!A || !B || !C) throw UsageError("realization needs \"A\", \"B\" and \"C\"");
            const Eigen::Index n = A->rows(), m = B->cols(), p = C->rows();
            if (A->cols() != n) throw UsageError("A must be square");
            pms::PencilRealization<double> s;
            s.A = *A;
            s.E = get("E").value_or(Eigen::MatrixXd::Identity(n, n));
            s.B = *B;
            s.F = get("F").value_or(Eigen::MatrixXd::Zero(n, m));
            s.C = *C;
            s.G = get("G").value_or(Eigen::MatrixXd::Zero(p, n));
            s.D = get("D").value_or(Eigen::MatrixXd::Zero(p, m));
            s.H = get("H").value_or(Eigen::MatrixXd::Zero(p, m));
            s.validate();
            d.descriptor_form = !j.contains("F") && !j.contains("G") && !j.contains("H");
            d.sys = std::move(s);
        } else if (d.kind == "polysystemmatrix") {
            pms::PolySystemMatrix<double> s;
            s.T = parse_polymat(need("T"), "T");
            s.U = parse_polymat(need("U"), "U");
            s.V = parse_polymat(need("V"), "V");
            if (j.contains("W"))
                s.W = parse_polymat(j["W"], "W");
            else
                s.W = pms::PolyMatrix<double>::zero(s.V.rows(), s.U.cols());
            s.validate();
            d.spm = std::move(s);
        } else {
            throw UsageError("unknown kind \"" + d.kind +
                             "\" (expected polymatrix, rationalmatrix, pencil, realization or "
                             "polysystemmatrix)");
        }
    } catch (const pms::Error& e) {
        throw UsageError(e.what());  // shape problems in the document are input errors
    }

    if (j.contains("grade")) {
        if (!j["grade"].is_number_integer() || j["grade"].get<long long>() < 0)
            throw UsageError("grade: expected a nonnegative integer");
        d.grade = j["grade"].get<int>();
    }
    for (const char* key : {"atol", "rtol"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_number() || j[key].get<double>() < 0.0)
            throw UsageError(std::string(key) + ": expected a nonnegative number");
        (std::string(key) == "atol" ? d.tol.atol : d.tol.rtol) = j[key].get<double>();
    }
    return d;
}

// ---------------------------------------------------------------------------
// Flags.

struct Options {
    std::string format = "text";
    std::string via;  // empty = per-kind default
    int grade = -1;
    bool grade_set = false;
    long long seed = 0;
    bool seed_set = false;
    bool verbose = false;
};

pms::Via parse_via(const std::string& v, pms::Via dflt) {
    if (v.empty()) return dflt;
    if (v == "cf1") return pms::Via::cf1;
    if (v == "cf2") return pms::Via::cf2;
    if (v == "lps") return pms::Via::lps;
    return pms::Via::ls;
}

// Rational-matrix routes: ls = descriptor linearization, lps = pencil
// linearization; the companion routes need polynomial input.
pms::RmMethod parse_rm_method(const std::string& v) {
    if (v.empty() || v == "ls") return pms::RmMethod::descriptor_lin;
    if (v == "lps") return pms::RmMethod::pencil_lin;
    throw UsageError("--via " + v + " applies to polynomial matrices only (use ls or lps)");
}

pms::PZMethod parse_pz_method(const std::string& v) {
    if (v.empty() || v == "cf1" || v == "cf2") return pms::PZMethod::companion;
    return v == "lps" ? pms::PZMethod::pencil_lin : pms::PZMethod::descriptor_lin;
}

// ---------------------------------------------------------------------------
// Report assembly helpers.

std::vector<std::pair<cplx, int>> sorted_pairs(std::vector<std::pair<cplx, int>> v) {
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (cplx_less(a.first, b.first)) return true;
        if (cplx_less(b.first, a.first)) return false;
        return a.second < b.second;
    });
    return v;
}

std::vector<pms::EigenvalueCluster> sorted_clusters(std::vector<pms::EigenvalueCluster> cs) {
    std::stable_sort(cs.begin(), cs.end(),
                     [](const auto& a, const auto& b) { return cplx_less(a.value, b.value); });
    return cs;
}

std::vector<int> pad_front(const std::vector<int>& v, Eigen::Index len) {
    if (static_cast<Eigen::Index>(v.size()) >= len) return v;
    std::vector<int> out(static_cast<size_t>(len) - v.size(), 0);
    out.insert(out.end(), v.begin(), v.end());
    return out;
}

J jclusters(const std::vector<pms::EigenvalueCluster>& cs, bool verbose, Eigen::Index r) {
    J a = J::array();
    for (const auto& c : sorted_clusters(cs)) {
        J e = J::object();
        e["value"] = jc(c.value);
        e["multiplicities"] = verbose ? pad_front(c.mults, r) : c.mults;
        a.push_back(std::move(e));
    }
    return a;
}

std::string clusters_text(const std::vector<pms::EigenvalueCluster>& cs, bool verbose,
                          Eigen::Index r) {
    if (cs.empty()) return "finite eigenvalues: none\n";
    std::string s = "finite eigenvalues:\n";
    for (const auto& c : sorted_clusters(cs)) {
        s += "  " + cplx_str(c.value) + " (multiplicities " +
             int_list_str(verbose ? pad_front(c.mults, r) : c.mults) + ")\n";
    }
    return s;
}

J jzp(const std::vector<std::pair<cplx, int>>& finite, const std::vector<int>& infinite) {
    J o = J::object();
    J fin = J::array();
    Eigen::Index total = 0;
    for (const auto& [v, q] : sorted_pairs(finite)) {
        J e = J::object();
        e["value"] = jc(v);
        e["mult"] = q;
        fin.push_back(std::move(e));
        total += q;
    }
    J inf = J::array();
    for (int q : infinite) {
        J e = J::object();
        e["value"] = "inf";
        e["mult"] = q;
        inf.push_back(std::move(e));
        total += q;
    }
    o["finite"] = std::move(fin);
    o["infinite"] = std::move(inf);
    o["total"] = total;
    return o;
}

// One-line view: "finite: 1 (x2); infinite: mult 1; <label> 3".  Finite values
// with the same location are grouped; multiplicities stay explicit in JSON.
std::string zp_text(const std::vector<std::pair<cplx, int>>& finite,
                    const std::vector<int>& infinite, const std::string& total_label) {
    std::string s = "finite: ";
    const auto fs = sorted_pairs(finite);
    Eigen::Index total = 0;
    if (fs.empty()) {
        s += "none";
    } else {
        std::vector<std::pair<cplx, int>> grouped;
        for (const auto& [v, q] : fs) {
            if (!grouped.empty() && !cplx_less(grouped.back().first, v) &&
                !cplx_less(v, grouped.back().first))
                grouped.back().second += q;
            else
                grouped.emplace_back(v, q);
        }
        for (size_t i = 0; i < grouped.size(); ++i) {
            if (i) s += ", ";
            s += cplx_str(grouped[i].first) + " (x" + std::to_string(grouped[i].second) + ")";
        }
    }
    for (const auto& [v, q] : fs) total += q;
    s += "; infinite: ";
    if (infinite.empty()) {
        s += "none";
    } else if (infinite.size() == 1) {
        s += "mult " + std::to_string(infinite[0]);
    } else {
        s += "mults ";
        for (size_t i = 0; i < infinite.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(infinite[i]);
        }
    }
    for (int q : infinite) total += q;
    s += "; " + total_label + " " + std::to_string(total);
    return s;
}

J mat_json(const Eigen::MatrixXd& X) {
    J rows = J::array();
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        J row = J::array();
        for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back(canon(X(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string mat_text(const std::string& name, const Eigen::MatrixXd& X) {
    std::string s = name + ":\n";
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        s += "  [";
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            if (j) s += ", ";
            s += num_str(X(i, j));
        }
        s += "]\n";
    }
    return s;
}

// Pretty form of an exact polynomial, highest power first: "x^2 - 3/2 x + 1".
std::string exact_poly_str(const pms::exact::ExactPoly& p) {
    if (p.c.empty()) return "0";
    std::string s;
    for (int i = p.degree(); i >= 0; --i) {
        const auto& co = p.c[static_cast<size_t>(i)];
        if (co == 0) continue;
        const bool neg = co < 0;
        const pms::exact::Rat mag = neg ? pms::exact::Rat(-co) : co;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        const std::string ms = mag.get_str();
        if (i == 0) {
            s += ms;
        } else {
            if (ms != "1") s += ms + " ";
            s += i == 1 ? "x" : "x^" + std::to_string(i);
        }
    }
    return s;
}

// ---------------------------------------------------------------------------
// Per-command handlers.  Each fills both the JSON object and the text form.

struct Output {
    J j = J::object();
    std::string text;
};

void not_for_kind(const std::string& command, const Doc& doc) {
    if (doc.spm)
        throw UsageError(command + " does not apply to a polynomial system matrix; run "
                                   "\"linearize\" or \"minreal\" first and analyze the resulting "
                                   "realization");
    throw UsageError(command + " does not apply to kind \"" + doc.kind + "\"");
}

void common_header(Output& out, const std::string& command, const Doc& doc, Eigen::Index rows,
                   Eigen::Index cols) {
    out.j["command"] = command;
    out.j["input"] = doc.kind;
    out.j["rows"] = rows;
    out.j["cols"] = cols;
}

void emit_structure_report(Output& out, const Doc& doc, const pms::StructureReport& rep,
                           bool verbose) {
    const bool poly = doc.kind == "polymatrix";
    common_header(out, "kstruct", doc, rep.rows, rep.cols);
    if (poly) out.j["grade"] = rep.grade;
    out.j["method"] = rep.method;
    out.j["normal_rank"] = rep.r;
    if (poly) {
        out.j["finite_eigenvalues"] = jclusters(rep.finiteEigs, verbose, rep.r);
        out.j["infinite_multiplicities"] = rep.alpha_inf;
        out.j["infinite_structural_indices"] = rep.sigma_inf();
    }
    out.j["right_minimal_indices"] = rep.eps;
    out.j["left_minimal_indices"] = rep.eta;
    out.j["zeros"] = jzp(rep.finiteZeros, rep.infZeros);
    out.j["poles"] = jzp(rep.finitePoles, rep.infPoles);
    J sums = J::object();
    if (poly) {
        sums["delta_fin"] = rep.delta_fin();
        sums["delta_inf"] = rep.delta_inf();
    }
    sums["mu"] = rep.mu();
    sums["delta_z"] = rep.delta_z();
    sums["delta_p"] = rep.delta_p();
    out.j["sums"] = std::move(sums);

    std::string t;
    if (poly) {
        t += "polynomial matrix " + std::to_string(rep.rows) + "x" + std::to_string(rep.cols) +
             ", grade " + std::to_string(rep.grade) + ", normal rank " + std::to_string(rep.r) +
             " (method " + rep.method + ")\n";
        t += clusters_text(rep.finiteEigs, verbose, rep.r);
        t += "infinite multiplicities: " + int_list_str(rep.alpha_inf) + "\n";
        t += "infinite structural indices: " + int_list_str(rep.sigma_inf()) + "\n";
    } else {
        t += "rational matrix " + std::to_string(rep.rows) + "x" + std::to_string(rep.cols) +
             ", normal rank " + std::to_string(rep.r) + " (method " + rep.method + ")\n";
    }
    t += "right minimal indices: " + int_list_str(rep.eps) + "\n";
    t += "left minimal indices: " + int_list_str(rep.eta) + "\n";
    t += "zeros: " + zp_text(rep.finiteZeros, rep.infZeros, "total") + "\n";
    t += "poles: " + zp_text(rep.finitePoles, rep.infPoles, "McMillan degree") + "\n";
    if (poly) {
        t += "sums: delta_fin " + std::to_string(rep.delta_fin()) + " + delta_inf " +
             std::to_string(rep.delta_inf()) + " + mu " + std::to_string(rep.mu()) + " = " +
             std::to_string(rep.delta_fin() + rep.delta_inf() + rep.mu()) + " = grade x rank\n";
    } else {
        t += "balance: delta_p " + std::to_string(rep.delta_p()) + " = delta_z " +
             std::to_string(rep.delta_z()) + " + mu " + std::to_string(rep.mu()) + "\n";
    }
    out.text = std::move(t);
}

void emit_pencil_structure(Output& out, const Doc& doc, const pms::KroneckerStructure& ks,
                           Eigen::Index rows, Eigen::Index cols, Eigen::Index order,
                           bool verbose) {
    common_header(out, "kstruct", doc, rows, cols);
    if (order >= 0) out.j["order"] = order;
    out.j["normal_rank"] = ks.r;
    out.j["finite_eigenvalues"] = jclusters(ks.finiteEigs, verbose, ks.r);
    out.j["infinite_multiplicities"] = ks.inf_mults;
    out.j["right_minimal_indices"] = ks.eps;
    out.j["left_minimal_indices"] = ks.eta;
    J sums = J::object();
    sums["delta_fin"] = ks.delta_fin();
    sums["delta_inf"] = ks.delta_inf();
    sums["mu"] = ks.mu();
    out.j["sums"] = std::move(sums);

    std::string t = (doc.pencil ? "pencil " : "system matrix pencil ") + std::to_string(rows) +
                    "x" + std::to_string(cols) + ", normal rank " + std::to_string(ks.r) + "\n";
    t += clusters_text(ks.finiteEigs, verbose, ks.r);
    t += "infinite multiplicities: " + int_list_str(ks.inf_mults) + "\n";
    t += "right minimal indices: " + int_list_str(ks.eps) + "\n";
    t += "left minimal indices: " + int_list_str(ks.eta) + "\n";
    t += "sums: delta_fin " + std::to_string(ks.delta_fin()) + ", delta_inf " +
         std::to_string(ks.delta_inf()) + ", mu " + std::to_string(ks.mu()) + "\n";
    out.text = std::move(t);
}

void cmd_kstruct(Output& out, const Doc& doc, const Options& opt) {
    if (doc.pm) {
        const auto rep = pms::pm_kstruct(*doc.pm, parse_via(opt.via, pms::Via::cf1),
                                         opt.grade_set ? opt.grade : doc.grade, doc.tol);
        emit_structure_report(out, doc, rep, opt.verbose);
    } else if (doc.rm) {
        const auto rep = pms::rm_analyze(*doc.rm, parse_rm_method(opt.via), doc.tol);
        emit_structure_report(out, doc, rep, opt.verbose);
    } else if (doc.pencil) {
        const auto ks = pms::pkstruct(doc.pencil->M, doc.pencil->N, doc.tol);
        emit_pencil_structure(out, doc, ks, doc.pencil->rows(), doc.pencil->cols(), -1,
                              opt.verbose);
    } else if (doc.sys) {
        const auto Z = pms::zero_pencil(*doc.sys);
        const auto ks = pms::pkstruct(Z.M, Z.N, doc.tol);
        emit_pencil_structure(out, doc, ks, Z.rows(), Z.cols(), doc.sys->order(), opt.verbose);
    } else {
        not_for_kind("kstruct", doc);
    }
}

void cmd_eigvals(Output& out, const Doc& doc, const Options& opt) {
    std::vector<cplx> finite;
    Eigen::Index dinf = 0;
    if (doc.pm) {
        const auto ev = pms::pm_eigvals(*doc.pm, parse_via(opt.via, pms::Via::cf1),
                                        opt.grade_set ? opt.grade : doc.grade, doc.tol);
        finite = ev.finite;
        dinf = ev.delta_inf;
        common_header(out, "eigvals", doc, ev.report.rows, ev.report.cols);
        out.j["grade"] = ev.report.grade;
        out.j["method"] = ev.report.method;
    } else if (doc.pencil) {
        const auto [f, d] = pms::peigvals(doc.pencil->M, doc.pencil->N, doc.tol);
        finite = f;
        dinf = d;
        common_header(out, "eigvals", doc, doc.pencil->rows(), doc.pencil->cols());
    } else {
        not_for_kind("eigvals", doc);
    }
    std::sort(finite.begin(), finite.end(), cplx_less);
    J a = J::array();
    for (const auto& v : finite) a.push_back(jc(v));
    out.j["finite"] = std::move(a);
    out.j["infinite_count"] = dinf;

    std::string t = "finite: ";
    if (finite.empty()) t += "none";
    for (size_t i = 0; i < finite.size(); ++i) {
        if (i) t += ", ";
        t += cplx_str(finite[i]);
    }
    t += "\ninfinite count: " + std::to_string(dinf) + "\n";
    out.text = std::move(t);
}

void cmd_zeros_poles(Output& out, const Doc& doc, const Options& opt, bool poles) {
    const std::string command = poles ? "poles" : "zeros";
    std::vector<std::pair<cplx, int>> finite;
    std::vector<int> infinite;
    std::string method;
    Eigen::Index rows = 0, cols = 0;
    if (doc.pm) {
        const auto m = parse_pz_method(opt.via);
        const auto zp = poles ? pms::pm_poles(*doc.pm, m, doc.tol) : pms::pm_zeros(*doc.pm, m, doc.tol);
        finite = zp.finite;
        infinite = zp.infinite;
        method = m == pms::PZMethod::companion ? "companion"
                                               : (m == pms::PZMethod::pencil_lin ? "lps" : "ls");
        rows = doc.pm->rows();
        cols = doc.pm->cols();
    } else if (doc.rm) {
        const auto m = parse_rm_method(opt.via);
        const auto zp = poles ? pms::rm_poles(*doc.rm, m, doc.tol) : pms::rm_zeros(*doc.rm, m, doc.tol);
        finite = zp.finite;
        infinite = zp.infinite;
        method = m == pms::RmMethod::descriptor_lin ? "ls" : "lps";
        rows = doc.rm->rows();
        cols = doc.rm->cols();
    } else if (doc.pencil && !poles) {
        const auto pz = pms::pzeros(doc.pencil->M, doc.pencil->N, doc.tol);
        finite = pms::detail::flatten_clusters(pz.finite);
        infinite = pz.inf_zero_mults;
        method = "klf";
        rows = doc.pencil->rows();
        cols = doc.pencil->cols();
    } else if (doc.sys) {
        // Zeros of the realized matrix are the zero structure of the system
        // matrix; poles are the zero structure of the bordered pole pencil.
        // Both readings assume the realization is strongly irreducible -- run
        // minreal first otherwise.
        const auto P = poles ? pms::pole_pencil(*doc.sys) : pms::zero_pencil(*doc.sys);
        const auto pz = pms::pzeros(P.M, P.N, doc.tol);
        finite = pms::detail::flatten_clusters(pz.finite);
        infinite = pz.inf_zero_mults;
        method = poles ? "pole_pencil" : "system_matrix";
        rows = doc.sys->outputs();
        cols = doc.sys->inputs();
    } else {
        not_for_kind(command, doc);
    }
    common_header(out, command, doc, rows, cols);
    out.j["method"] = method;
    const J zp = jzp(finite, infinite);
    out.j["finite"] = zp["finite"];
    out.j["infinite"] = zp["infinite"];
    out.j["total"] = zp["total"];
    out.text = zp_text(finite, infinite, poles ? "McMillan degree" : "total") + "\n";
}

void cmd_roots(Output& out, const Doc& doc, const Options&) {
    std::vector<cplx> roots;
    if (doc.pm) {
        roots = pms::pm_roots(*doc.pm, doc.tol);
        common_header(out, "roots", doc, doc.pm->rows(), doc.pm->cols());
    } else if (doc.pencil) {
        const auto& P = *doc.pencil;
        if (P.rows() != P.cols() || pms::prank(P.M, P.N, doc.tol) != P.rows())
            throw pms::NotRegular("determinant roots need a regular pencil");
        roots = pms::peigvals(P.M, P.N, doc.tol).first;
        common_header(out, "roots", doc, P.rows(), P.cols());
    } else {
        not_for_kind("roots", doc);
    }
    std::sort(roots.begin(), roots.end(), cplx_less);
    J a = J::array();
    for (const auto& v : roots) a.push_back(jc(v));
    out.j["roots"] = std::move(a);
    std::string t = "roots: ";
    if (roots.empty()) t += "none";
    for (size_t i = 0; i < roots.size(); ++i) {
        if (i) t += ", ";
        t += cplx_str(roots[i]);
    }
    out.text = t + "\n";
}

// Normal rank by evaluation at seeded random probe points; the maximum over
// three pole-free probes is the generic rank with overwhelming probability.
Eigen::Index seeded_rank(const Doc& doc, long long seed) {
    std::mt19937_64 gen(static_cast<unsigned long long>(seed));
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    Eigen::Index r = 0;
    int found = 0;
    for (int attempt = 0; attempt < 60 && found < 3; ++attempt) {
        const double x = U(gen);
        try {
            const Eigen::MatrixXd V = doc.pm ? pms::pm_eval(*doc.pm, x) : pms::rm_eval(*doc.rm, x);
            r = std::max(r, pms::detail::constant_rank<double>(V, doc.tol));
            ++found;
        } catch (const pms::PoleAtEvaluationPoint&) {
        }
    }
    if (found == 0) throw pms::Error("all rank probe points hit poles");
    return r;
}

void cmd_rank(Output& out, const Doc& doc, const Options& opt) {
    Eigen::Index r = 0;
    std::string method;
    if (doc.pm) {
        common_header(out, "rank", doc, doc.pm->rows(), doc.pm->cols());
        if (opt.seed_set) {
            r = seeded_rank(doc, opt.seed);
            method = "evaluation";
        } else {
            r = pms::pm_rank(*doc.pm, pms::RankMethod::linearization, doc.tol);
            method = "linearization";
        }
    } else if (doc.rm) {
        common_header(out, "rank", doc, doc.rm->rows(), doc.rm->cols());
        if (opt.seed_set) {
            r = seeded_rank(doc, opt.seed);
            method = "evaluation";
        } else {
            const auto m = parse_rm_method(opt.via);
            r = pms::rm_rank(*doc.rm, m, doc.tol);
            method = m == pms::RmMethod::descriptor_lin ? "ls" : "lps";
        }
    } else if (doc.pencil) {
        common_header(out, "rank", doc, doc.pencil->rows(), doc.pencil->cols());
        r = pms::prank(doc.pencil->M, doc.pencil->N, doc.tol);
        method = "klf";
    } else if (doc.sys) {
        const auto Z = pms::zero_pencil(*doc.sys);
        common_header(out, "rank", doc, Z.rows(), Z.cols());
        r = pms::prank(Z.M, Z.N, doc.tol);
        method = "system_matrix";
    } else {
        not_for_kind("rank", doc);
    }
    out.j["method"] = method;
    out.j["normal_rank"] = r;
    out.text = "normal rank: " + std::to_string(r) + "\n";
}

void cmd_bool(Output& out, const Doc& doc, const std::string& command) {
    if (!doc.pm) not_for_kind(command, doc);
    const bool v = command == "regular" ? pms::is_pm_regular(*doc.pm, doc.tol)
                                        : pms::is_pm_unimodular(*doc.pm, doc.tol);
    common_header(out, command, doc, doc.pm->rows(), doc.pm->cols());
    out.j[command] = v;
    out.text = command + ": " + (v ? "true" : "false") + "\n";
}

void cmd_smith(Output& out, const Doc& doc, const Options&) {
    if (!doc.pm) not_for_kind("smith", doc);
    const auto sm = pms::exact::exact_smith(pms::exact::ExactPolyMatrix::from(*doc.pm));
    common_header(out, "smith", doc, doc.pm->rows(), doc.pm->cols());
    out.j["normal_rank"] = sm.rank;
    J inv = J::array();
    std::string t = "normal rank: " + std::to_string(sm.rank) + "\ninvariant polynomials:\n";
    for (const auto& p : sm.invariants) {
        J e = J::object();
        e["degree"] = p.degree();
        J cs = J::array();
        for (const auto& co : p.c) cs.push_back(pms::exact::Rat(co).get_str());
        e["coefficients"] = std::move(cs);
        inv.push_back(std::move(e));
        t += "  " + exact_poly_str(p) + "\n";
    }
    if (sm.invariants.empty()) t += "  (none)\n";
    out.j["invariants"] = std::move(inv);
    out.text = std::move(t);
}

void cmd_minindices(Output& out, const Doc& doc, const Options& opt) {
    std::vector<int> eps, eta;
    Eigen::Index rows = 0, cols = 0;
    if (doc.pm) {
        const auto rep = pms::pm_kstruct(*doc.pm, parse_via(opt.via, pms::Via::cf1),
                                         opt.grade_set ? opt.grade : doc.grade, doc.tol);
        eps = rep.eps;
        eta = rep.eta;
        rows = rep.rows;
        cols = rep.cols;
    } else if (doc.rm) {
        const auto rep = pms::rm_analyze(*doc.rm, parse_rm_method(opt.via), doc.tol);
        eps = rep.eps;
        eta = rep.eta;
        rows = rep.rows;
        cols = rep.cols;
    } else if (doc.pencil) {
        const auto ks = pms::pkstruct(doc.pencil->M, doc.pencil->N, doc.tol);
        eps = ks.eps;
        eta = ks.eta;
        rows = doc.pencil->rows();
        cols = doc.pencil->cols();
    } else if (doc.sys) {
        const auto Z = pms::zero_pencil(*doc.sys);
        const auto ks = pms::pkstruct(Z.M, Z.N, doc.tol);
        eps = ks.eps;
        eta = ks.eta;
        rows = Z.rows();
        cols = Z.cols();
    } else {
        not_for_kind("minindices", doc);
    }
    common_header(out, "minindices", doc, rows, cols);
    out.j["right_minimal_indices"] = eps;
    out.j["left_minimal_indices"] = eta;
    out.text = "right minimal indices: " + int_list_str(eps) + "\nleft minimal indices: " +
               int_list_str(eta) + "\n";
}

void emit_realization(Output& out, const pms::PencilRealization<double>& s, bool descriptor) {
    out.j["order"] = s.order();
    out.j["A"] = mat_json(s.A);
    out.j["E"] = mat_json(s.E);
    out.j["B"] = mat_json(s.B);
    if (!descriptor) out.j["F"] = mat_json(s.F);
    out.j["C"] = mat_json(s.C);
    if (!descriptor) out.j["G"] = mat_json(s.G);
    out.j["D"] = mat_json(s.D);
    if (!descriptor) out.j["H"] = mat_json(s.H);
    out.text += "order: " + std::to_string(s.order()) + "\n";
    out.text += mat_text("A", s.A) + mat_text("E", s.E) + mat_text("B", s.B);
    if (!descriptor) out.text += mat_text("F", s.F);
    out.text += mat_text("C", s.C);
    if (!descriptor) out.text += mat_text("G", s.G);
    out.text += mat_text("D", s.D);
    if (!descriptor) out.text += mat_text("H", s.H);
}

void cmd_linearize(Output& out, const Doc& doc, const Options& opt) {
    if (doc.pm && (opt.via.empty() || opt.via == "cf1" || opt.via == "cf2")) {
        const auto kind = opt.via == "cf2" ? pms::CompanionKind::second : pms::CompanionKind::first;
        const auto cp = pms::build_companion(*doc.pm, kind,
                                             opt.grade_set ? opt.grade : doc.grade, doc.tol);
        common_header(out, "linearize", doc, cp.pencil.rows(), cp.pencil.cols());
        out.j["form"] = "companion";
        out.j["variant"] = opt.via == "cf2" ? "cf2" : "cf1";
        out.j["grade"] = cp.k;
        out.j["M"] = mat_json(cp.pencil.M);
        out.j["N"] = mat_json(cp.pencil.N);
        out.text = "companion form " + std::string(opt.via == "cf2" ? "cf2" : "cf1") + ", grade " +
                   std::to_string(cp.k) + ", size " + std::to_string(cp.pencil.rows()) + "x" +
                   std::to_string(cp.pencil.cols()) + " (pencil x N - M)\n" +
                   mat_text("M", cp.pencil.M) + mat_text("N", cp.pencil.N);
        return;
    }
    if (doc.pm || doc.rm) {
        if (doc.rm && (opt.via == "cf1" || opt.via == "cf2"))
            throw UsageError("--via " + opt.via + " applies to polynomial matrices only");
        const pms::RationalMatrix<double> R =
            doc.rm ? *doc.rm : pms::RationalMatrix<double>::from_poly(*doc.pm);
        const auto kind = opt.via == "lps" ? pms::LinKind::pencil : pms::LinKind::descriptor;
        const auto sys = pms::rm_linearize(R, kind, pms::SpMode::columnwise, doc.tol);
        common_header(out, "linearize", doc, R.rows(), R.cols());
        out.j["form"] = "realization";
        out.j["variant"] = opt.via == "lps" ? "lps" : "ls";
        out.text = "minimal realization (" + std::string(opt.via == "lps" ? "lps" : "ls") + ")\n";
        emit_realization(out, sys, false);
        return;
    }
    if (doc.spm) {
        const auto sys = pms::spm_linearize(*doc.spm);
        common_header(out, "linearize", doc, doc.spm->V.rows(), doc.spm->U.cols());
        out.j["form"] = "realization";
        out.j["variant"] = "system_matrix";
        out.text = "linearized polynomial system matrix\n";
        emit_realization(out, sys, false);
        return;
    }
    throw UsageError("linearize applies to polymatrix, rationalmatrix or polysystemmatrix input; "
                     "a pencil or realization is already linear");
}

void cmd_minreal(Output& out, const Doc& doc, const Options&) {
    if (doc.sys && doc.descriptor_form) {
        pms::DescriptorRealization<double> d{doc.sys->A, doc.sys->E, doc.sys->B, doc.sys->C,
                                             doc.sys->D};
        const auto r = pms::lsminreal(d, true, true, true, doc.tol);
        common_header(out, "minreal", doc, doc.sys->outputs(), doc.sys->inputs());
        out.j["form"] = "descriptor";
        out.j["order_before"] = d.order();
        out.j["order_after"] = r.sys.order();
        J rem = J::object();
        rem["uncontrollable"] = r.removed_contr;
        rem["unobservable"] = r.removed_obs;
        rem["non_dynamic"] = r.removed_nondyn;
        out.j["removed"] = std::move(rem);
        out.text = "order: " + std::to_string(d.order()) + " -> " + std::to_string(r.sys.order()) +
                   " (removed: uncontrollable " + std::to_string(r.removed_contr) +
                   ", unobservable " + std::to_string(r.removed_obs) + ", non-dynamic " +
                   std::to_string(r.removed_nondyn) + ")\n";
        emit_realization(out, pms::to_pencil_realization(r.sys), true);
        return;
    }
    if (doc.sys || doc.spm) {
        const pms::PencilRealization<double> s0 = doc.sys ? *doc.sys : pms::spm_linearize(*doc.spm);
        const auto r = pms::lpsminreal(s0, doc.tol);
        common_header(out, "minreal", doc, s0.outputs(), s0.inputs());
        out.j["form"] = "pencil";
        out.j["order_before"] = s0.order();
        out.j["order_after"] = r.sys.order();
        out.j["removed"] = r.removed;
        out.text = "order: " + std::to_string(s0.order()) + " -> " + std::to_string(r.sys.order()) +
                   " (removed " + std::to_string(r.removed) + " states)\n";
        emit_realization(out, r.sys, false);
        return;
    }
    throw UsageError("minreal applies to realization or polysystemmatrix input");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"structural analysis of polynomial and rational matrices"};
    std::string command, inputPath;
    Options opt;
    double atol = -1.0, rtol = -1.0;
    app.add_option("command", command,
                   "kstruct | eigvals | zeros | poles | roots | rank | regular | unimodular | "
                   "smith | minindices | linearize | minreal")
        ->required();
    app.add_option("input", inputPath, "input document (JSON)")->required();
    app.add_option("--grade", opt.grade, "grade for the infinite structure (>= degree)");
    app.add_option("--atol", atol, "absolute tolerance for rank decisions");
    app.add_option("--rtol", rtol, "relative tolerance for rank decisions");
    app.add_option("--via", opt.via, "route: cf1 | cf2 | ls | lps")
        ->check(CLI::IsMember({"cf1", "cf2", "ls", "lps"}));
    app.add_option("--format", opt.format, "output format: text | json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", opt.seed, "seed for random rank probe points");
    app.add_flag("--verbose", opt.verbose, "pad multiplicity lists to the normal rank");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    opt.grade_set = app.count("--grade") > 0;
    opt.seed_set = app.count("--seed") > 0;
    if (opt.grade_set && opt.grade < 0) {
        std::cerr << "error: --grade must be nonnegative\n";
        return 2;
    }

    static const std::set<std::string> commands = {
        "kstruct", "eigvals", "zeros",      "poles",      "roots",     "rank",
        "regular", "unimodular", "smith",   "minindices", "linearize", "minreal"};
    if (!commands.count(command)) {
        std::cerr << "error: unknown command \"" << command << "\"\n";
        return 2;
    }

    Doc doc;
    try {
        doc = load_doc(inputPath);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    if (app.count("--atol") > 0) doc.tol.atol = atol;
    if (app.count("--rtol") > 0) doc.tol.rtol = rtol;

    Output out;
    try {
        if (command == "kstruct")
            cmd_kstruct(out, doc, opt);
        else if (command == "eigvals")
            cmd_eigvals(out, doc, opt);
        else if (command == "zeros")
            cmd_zeros_poles(out, doc, opt, false);
        else if (command == "poles")
            cmd_zeros_poles(out, doc, opt, true);
        else if (command == "roots")
            cmd_roots(out, doc, opt);
        else if (command == "rank")
            cmd_rank(out, doc, opt);
        else if (command == "regular" || command == "unimodular")
            cmd_bool(out, doc, command);
        else if (command == "smith")
            cmd_smith(out, doc, opt);
        else if (command == "minindices")
            cmd_minindices(out, doc, opt);
        else if (command == "linearize")
            cmd_linearize(out, doc, opt);
        else
            cmd_minreal(out, doc, opt);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const pms::NotRegular&) {
        std::cerr << "error: matrix is singular\n";
        return 3;
    } catch (const pms::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }

    if (opt.format == "json")
        std::cout << out.j.dump(2) << "\n";
    else
        std::cout << out.text;
    return 0;
}
