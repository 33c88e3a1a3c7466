#include "kalman/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "kalman/asympt.hpp"
#include "kalman/degrees.hpp"
#include "kalman/errors.hpp"
#include "kalman/genfun.hpp"
#include "kalman/isotropic.hpp"

namespace kalman::cli {

namespace {

using Json = nlohmann::ordered_json;

std::string fmt_double(double v, const char* pattern = "%.12g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string rational_str(const BigRational& q) { return q.str(); }

void emit(std::ostream& out, const std::string& format, const Json& record,
          const std::function<void(std::ostream&)>& text) {
  if (format == "json")
    out << record.dump() << '\n';
  else
    text(out);
}

Json record(const std::string& command, Json inputs, Json result, const std::string& provenance) {
  Json r;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  r["result"] = std::move(result);
  r["provenance"] = provenance;
  return r;
}

std::vector<unsigned> ones_like(std::size_t k) { return std::vector<unsigned>(k, 1u); }

// Evaluates fn(i) for i in [0, count) on up to `threads` workers; results keep index order.
template <typename Row>
std::vector<Row> parallel_rows(std::size_t count, unsigned threads,
                               const std::function<Row(std::size_t)>& fn) {
  std::vector<Row> rows(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        rows[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<std::vector<long>> parse_matrix(const std::string& text) {
  std::vector<std::vector<long>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<long> entries;
    std::stringstream es(row);
    std::string cell;
    while (std::getline(es, cell, ',')) {
      try {
        std::size_t used = 0;
        entries.push_back(std::stol(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError("malformed matrix entry '" + cell + "'");
      }
    }
    rows.push_back(std::move(entries));
  }
  return rows;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degrees, generating functions and asymptotics of generalized Kalman varieties",
               "kalmandeg"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App* sub, std::vector<std::string> choices) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(std::move(choices)))
        ->capture_default_str();
  };

  std::vector<unsigned> n, delta, omega, deg_z, caps, partition;
  unsigned y_cap = 0, k = 0, scalar_n = 0, scalar_delta = 0, scalar_omega = 1, parts = 0;
  unsigned factor = 1, probes = 3, threads = std::max(1u, std::thread::hardware_concurrency());
  unsigned max_n = 5, min_n = 0, max_omega = 4;
  bool compare = false, verify = false;
  std::string matrix_text, kind;

  auto list_opt = [](CLI::App* sub, const std::string& name, std::vector<unsigned>& target,
                     const std::string& help) {
    return sub->add_option(name, target, help)->delimiter(',');
  };

  auto* degree = app.add_subcommand("degree", "Degree factor by coefficient extraction");
  list_opt(degree, "--n", n, "Dimensions n_1,...,n_k")->required();
  list_opt(degree, "--delta", delta, "Codimensions delta_1,...,delta_k")->required();
  list_opt(degree, "--omega", omega, "Symmetric powers (default all 1)");
  list_opt(degree, "--deg-z", deg_z, "Degrees of the constraint varieties Z_i");
  add_format(degree, {"text", "json"});

  auto* symmetric = app.add_subcommand("symmetric", "Closed form for a single symmetric factor");
  symmetric->add_option("--n", scalar_n)->required();
  symmetric->add_option("--delta", scalar_delta)->required();
  symmetric->add_option("--omega", scalar_omega)->required();
  add_format(symmetric, {"text", "json"});

  auto* binary = app.add_subcommand("binary", "Degree factor in the binary format n = (2,...,2)");
  list_opt(binary, "--delta", delta, "delta_i in {0,1}")->required();
  list_opt(binary, "--omega", omega, "Symmetric powers")->required();
  add_format(binary, {"text", "json"});

  auto* stabilize = app.add_subcommand("stabilize", "Check stabilization as n_i grows");
  list_opt(stabilize, "--n", n, "Dimensions")->required();
  list_opt(stabilize, "--delta", delta, "Codimensions")->required();
  list_opt(stabilize, "--omega", omega, "Symmetric powers (default all 1)");
  stabilize->add_option("--factor", factor, "Factor index i (1-based)")->capture_default_str();
  stabilize->add_option("--probes", probes, "Extra dimensions to probe")->capture_default_str();
  add_format(stabilize, {"text", "json"});

  auto* genfun = app.add_subcommand("genfun", "Coefficients of the generating function");
  list_opt(genfun, "--omega", omega, "Symmetric powers")->required();
  list_opt(genfun, "--caps", caps, "Caps on n_1,...,n_k")->required();
  genfun->add_option("--y-cap", y_cap, "Cap on delta")->required();
  genfun->add_flag("--verify", verify, "Cross-check every coefficient by extraction");
  add_format(genfun, {"text", "json"});

  auto* isotropic = app.add_subcommand("isotropic", "Totally isotropic Kalman hypersurface");
  list_opt(isotropic, "--n", n, "Dimensions (>= 2)")->required();
  list_opt(isotropic, "--omega", omega, "Symmetric powers (default all 1)");
  add_format(isotropic, {"text", "json"});

  auto* codim = app.add_subcommand("codim", "Codimension of symmetric-tuple Kalman varieties");
  codim->add_option("--n", scalar_n)->required();
  codim->add_option("--k", k)->required();
  auto* parts_opt = codim->add_option("--parts", parts, "Number of parts t of the partition");
  list_opt(codim, "--partition", partition, "Partition of k")->excludes(parts_opt);
  add_format(codim, {"text", "json"});

  auto* asympt = app.add_subcommand("asympt", "Hypercubical asymptotic estimate");
  asympt->add_option("--k", k)->required();
  asympt->add_option("--omega", scalar_omega)->required();
  asympt->add_option("--delta", scalar_delta)->required();
  asympt->add_option("--n", scalar_n)->required();
  asympt->add_flag("--compare", compare, "Also compute the exact degree");
  add_format(asympt, {"text", "json"});

  auto* critical = app.add_subcommand("critical", "Critical-point constants and identities");
  critical->add_option("--k", k)->required();
  critical->add_option("--omega", scalar_omega)->required();
  critical->add_option("--delta", scalar_delta)->capture_default_str();
  add_format(critical, {"text", "json"});

  auto* macmahon = app.add_subcommand("macmahon", "Check the MacMahon master theorem");
  macmahon->add_option("--matrix", matrix_text, "Rows separated by ';', entries by ','")
      ->required();
  list_opt(macmahon, "--cap", caps, "Per-variable cap")->required();
  add_format(macmahon, {"text", "json"});

  auto* table = app.add_subcommand("table", "Tabulate a sweep");
  table->add_option("--kind", kind)
      ->required()
      ->check(CLI::IsMember({"matrix-ed", "hypercubical-compare", "isotropic-sym"}));
  table->add_option("--max-n", max_n)->capture_default_str();
  table->add_option("--min-n", min_n, "Smallest n (hypercubical-compare; default delta + 1)");
  table->add_option("--k", k, "Number of factors (hypercubical-compare)");
  table->add_option("--omega", scalar_omega)->capture_default_str();
  table->add_option("--delta", scalar_delta)->capture_default_str();
  table->add_option("--max-omega", max_omega, "Largest omega (isotropic-sym)")
      ->capture_default_str();
  table->add_option("--threads", threads)->capture_default_str();
  format = "csv";
  add_format(table, {"csv", "json"});

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }
  // The table default differs from the others.
  if (!table->parsed() && format == "csv") format = "text";

  try {
    if (degree->parsed()) {
      if (omega.empty()) omega = ones_like(n.size());
      const TensorFormat fmt(n, omega);
      const CodimVec cv(delta);
      const BigInt d = extract_degree(fmt, cv);
      Json inputs{{"n", n}, {"delta", delta}, {"omega", omega}};
      Json result{{"d", d.str()}};
      if (!deg_z.empty()) {
        inputs["deg-z"] = deg_z;
        result["degree"] = kalman_degree(fmt, cv, deg_z).str();
      }
      emit(out, format,
           record("degree", inputs, result,
                  "coefficient of h^delta prod t_i^(n_i-delta_i-1) in the product of geometric sums"),
           [&](std::ostream& os) {
             os << "d" << format_list(n) << " delta=" << format_list(delta)
                << " omega=" << format_list(omega) << " = " << d << '\n';
             if (result.contains("degree"))
               os << "degree = " << result["degree"].get<std::string>() << '\n';
           });
    } else if (symmetric->parsed()) {
      const BigInt closed = symmetric_degree(scalar_n, scalar_delta, scalar_omega);
      const BigInt extracted = extract_degree(TensorFormat({scalar_n}, {scalar_omega}),
                                              CodimVec({scalar_delta}));
      if (closed != extracted)
        throw InternalError("closed form " + closed.str() + " disagrees with extraction " +
                            extracted.str());
      emit(out, format,
           record("symmetric", {{"n", scalar_n}, {"delta", scalar_delta}, {"omega", scalar_omega}},
                  {{"d", closed.str()}, {"extraction", extracted.str()}},
                  "closed form sum_j C(delta+j,j)(omega-1)^j, checked by extraction"),
           [&](std::ostream& os) { os << "d = " << closed << '\n'; });
    } else if (binary->parsed()) {
      const BigInt d = binary_degree(CodimVec(delta), omega);
      emit(out, format,
           record("binary", {{"delta", delta}, {"omega", omega}}, {{"d", d.str()}},
                  "coefficient extraction on n = (2,...,2)"),
           [&](std::ostream& os) { os << "d = " << d << '\n'; });
    } else if (stabilize->parsed()) {
      if (omega.empty()) omega = ones_like(n.size());
      if (factor < 1) throw ValidationError("--factor is 1-based");
      const auto report = check_stabilization(TensorFormat(n, omega), CodimVec(delta), factor - 1, probes);
      Json values = Json::array();
      for (const auto& v : report.values) values.push_back(v.str());
      emit(out, format,
           record("stabilize",
                  {{"n", n}, {"delta", delta}, {"omega", omega}, {"factor", factor},
                   {"probes", probes}},
                  {{"threshold", report.threshold}, {"values", values},
                   {"stable_value", report.stable_value.str()}, {"stable", report.stable}},
                  "extraction at n_i, n_i+1, ..., n_i+probes"),
           [&](std::ostream& os) {
             os << "threshold n_" << factor << " >= " << report.threshold << '\n';
             for (std::size_t p = 0; p < report.values.size(); ++p)
               os << "n_" << factor << " = " << n[factor - 1] + p << ": " << report.values[p]
                  << '\n';
             os << (report.stable ? "stable" : "NOT stable") << " at " << report.stable_value
                << '\n';
           });
    } else if (genfun->parsed()) {
      const auto coeffs = expand_series(omega, caps, y_cap);
      for (const auto& [e, c] : coeffs) {
        std::vector<unsigned> nvec(e.begin(), e.end() - 1);
        const unsigned d = e[e.size() - 1];
        Json line{{"n", nvec}, {"delta", d}, {"coefficient", c.str()}};
        if (verify) {
          const BigInt x = extract_degree(TensorFormat(nvec, omega), CodimVec::leading(nvec.size(), d));
          if (x != c)
            throw InternalError("series coefficient " + c.str() + " at n = " + format_list(nvec) +
                                ", delta = " + std::to_string(d) + " disagrees with extraction " +
                                x.str());
          line["extraction"] = x.str();
        }
        if (format == "json")
          out << line.dump() << '\n';
        else
          out << "x^" << format_list(nvec) << " y^" << d << " " << c << '\n';
      }
    } else if (isotropic->parsed()) {
      if (omega.empty()) omega = ones_like(n.size());
      const auto r = isotropic_degree(TensorFormat(n, omega));
      Json result{{"degree", r.degree.str()}, {"components", r.components.str()},
                  {"N", r.ambient_dim}};
      if (n.size() == 1) result["symmetric_closed_form"] = isotropic_degree_symmetric(n[0], omega[0]).str();
      emit(out, format,
           record("isotropic", {{"n", n}, {"omega", omega}}, result,
                  "polar-class sum over bounded compositions, exact rationals"),
           [&](std::ostream& os) {
             os << "degree = " << r.degree << '\n'
                << "components = " << r.components << '\n'
                << "N = " << r.ambient_dim << '\n';
           });
    } else if (codim->parsed()) {
      unsigned value = 0;
      Json inputs{{"n", scalar_n}, {"k", k}};
      std::string provenance = "(k-1)(n-1)";
      if (!partition.empty()) {
        unsigned total = 0;
        for (auto p : partition) total += p;
        if (total != k)
          throw ValidationError("partition " + format_list(partition) + " does not sum to k = " +
                                std::to_string(k));
        value = partition_tuple_codim(scalar_n, partition);
        inputs["partition"] = partition;
        provenance = "(k-t)(n-1), t = number of parts";
      } else if (codim->count("--parts") > 0) {
        value = partition_tuple_codim(scalar_n, k, parts);
        inputs["parts"] = parts;
        provenance = "(k-t)(n-1), t = number of parts";
      } else {
        value = symmetric_tuple_codim(scalar_n, k);
      }
      Json result{{"codim", value}};
      if (k == 2 && partition.empty() && codim->count("--parts") == 0)
        for (const auto& row : kSymmetricMatrixKalmanTable)
          if (row.n == scalar_n) result["reference_degree"] = row.degree;
      emit(out, format, record("codim", inputs, result, provenance),
           [&](std::ostream& os) {
             os << "codim = " << value << '\n';
             if (result.contains("reference_degree"))
               os << "reference degree = " << result["reference_degree"].get<unsigned>()
                  << " (tabulated, no formula)\n";
           });
    } else if (asympt->parsed()) {
      AsymptoticEstimate est = asymptotic_degree(k, scalar_omega, scalar_delta, scalar_n);
      Json result{{"log10_estimate", fmt_double(est.log10_value)}};
      if (est.value) result["estimate"] = fmt_double(*est.value);
      BigInt exact;
      if (compare) {
        exact = extract_degree(TensorFormat::hypercubical(k, scalar_n, scalar_omega),
                               CodimVec::leading(k, scalar_delta));
        est = paired_with_exact(est, exact);
        result["exact"] = exact.str();
        result["ratio"] = fmt_double(*est.ratio_to_exact);
      }
      emit(out, format,
           record("asympt",
                  {{"k", k}, {"omega", scalar_omega}, {"delta", scalar_delta}, {"n", scalar_n},
                   {"compare", compare}},
                  result, "leading term at the critical point, log-space"),
           [&](std::ostream& os) {
             os << "n = " << scalar_n << '\n'
                << "log10(estimate) = " << fmt_double(est.log10_value) << '\n';
             if (est.value) os << "estimate = " << fmt_double(*est.value) << '\n';
             if (compare)
               os << "exact = " << exact << '\n'
                  << "ratio = " << fmt_double(*est.ratio_to_exact) << '\n';
           });
    } else if (critical->parsed()) {
      const auto c = critical_constants(k, scalar_omega, scalar_delta);
      const auto report = verify_critical_point(k, scalar_omega);
      Json result{{"c", rational_str(c.c)},
                  {"det_hessian", rational_str(c.det_hessian)},
                  {"L0", rational_str(c.L0)},
                  {"minus_ck_dk", rational_str(c.minus_ck_dk)},
                  {"fd_at_c", rational_str(report.fd_at_c)},
                  {"minus_ck_dk_computed", rational_str(report.minus_ck_dk)},
                  {"verified", report.ok()}};
      emit(out, format,
           record("critical", {{"k", k}, {"omega", scalar_omega}, {"delta", scalar_delta}}, result,
                  "closed forms; identities checked symbolically on F_D"),
           [&](std::ostream& os) {
             os << "c = " << c.c << '\n'
                << "det_hessian = " << c.det_hessian << '\n'
                << "L0 = " << c.L0 << '\n'
                << "minus_ck_dk = " << c.minus_ck_dk << '\n'
                << "F_D(c) = " << report.fd_at_c << '\n'
                << "-c_k dF_D(c) = " << report.minus_ck_dk << '\n'
                << "verified = " << (report.ok() ? "true" : "false") << '\n';
           });
      if (!report.ok()) {
        err << "critical point identities failed for k = " << k << ", omega = " << scalar_omega
            << '\n';
        return kExitInternal;
      }
    } else if (macmahon->parsed()) {
      const auto a = parse_matrix(matrix_text);
      const bool holds = macmahon_check(a, caps);
      emit(out, format,
           record("macmahon", {{"matrix", matrix_text}, {"cap", caps}}, {{"holds", holds}},
                  "coefficients of products of linear forms vs series of 1/det(I - TA)"),
           [&](std::ostream& os) { os << "holds = " << (holds ? "true" : "false") << '\n'; });
      if (!holds) return kExitInternal;
    } else if (table->parsed()) {
      if (kind == "matrix-ed") {
        const std::size_t count = std::size_t{max_n} * max_n;
        auto rows = parallel_rows<BigInt>(count, threads, [&](std::size_t i) {
          const unsigned n1 = static_cast<unsigned>(i / max_n) + 1;
          const unsigned n2 = static_cast<unsigned>(i % max_n) + 1;
          return extract_degree(TensorFormat({n1, n2}, {1, 1}), CodimVec({0, 0}));
        });
        if (format == "csv") out << "n1,n2,degree\n";
        for (std::size_t i = 0; i < count; ++i) {
          const unsigned n1 = static_cast<unsigned>(i / max_n) + 1;
          const unsigned n2 = static_cast<unsigned>(i % max_n) + 1;
          if (format == "csv")
            out << n1 << ',' << n2 << ',' << rows[i] << '\n';
          else
            out << Json{{"n1", n1}, {"n2", n2}, {"degree", rows[i].str()}}.dump() << '\n';
        }
      } else if (kind == "hypercubical-compare") {
        if (k == 0) throw ValidationError("--k is required for hypercubical-compare");
        const unsigned lo = min_n > 0 ? min_n : scalar_delta + 1;
        std::vector<unsigned> ns;
        for (unsigned v = lo; v <= max_n; ++v) ns.push_back(v);
        auto rows = parallel_rows<ComparisonRow>(ns.size(), threads, [&](std::size_t i) {
          return compare_exact_asymptotic(k, scalar_omega, scalar_delta, std::span(&ns[i], 1)).front();
        });
        if (format == "csv") out << "n,exact,estimate,ratio\n";
        for (const auto& r : rows) {
          const std::string est = fmt_double(r.estimate.log10_value);
          const std::string ratio = fmt_double(*r.estimate.ratio_to_exact);
          const std::string estimate =
              r.estimate.value ? fmt_double(*r.estimate.value) : "1e" + est;
          if (format == "csv")
            out << r.n << ',' << r.exact << ',' << estimate << ',' << ratio << '\n';
          else
            out << Json{{"n", r.n}, {"exact", r.exact.str()}, {"estimate", estimate},
                        {"ratio", ratio}}.dump()
                << '\n';
        }
      } else {
        struct Cell {
          unsigned n = 0, omega = 0;
          BigInt closed, general;
        };
        std::vector<std::pair<unsigned, unsigned>> grid;
        for (unsigned nn = 2; nn <= max_n; ++nn)
          for (unsigned w = 1; w <= max_omega; ++w) grid.emplace_back(nn, w);
        auto rows = parallel_rows<Cell>(grid.size(), threads, [&](std::size_t i) {
          const auto [nn, w] = grid[i];
          return Cell{nn, w, isotropic_degree_symmetric(nn, w),
                      isotropic_degree(TensorFormat({nn}, {w})).degree};
        });
        if (format == "csv") out << "n,omega,closed_form,general_formula\n";
        for (const auto& c : rows) {
          if (format == "csv")
            out << c.n << ',' << c.omega << ',' << c.closed << ',' << c.general << '\n';
          else
            out << Json{{"n", c.n}, {"omega", c.omega}, {"closed_form", c.closed.str()},
                        {"general_formula", c.general.str()}}.dump()
                << '\n';
          if (c.closed != c.general)
            throw InternalError("isotropic formulas disagree at n = " + std::to_string(c.n) +
                                ", omega = " + std::to_string(c.omega));
        }
      }
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace kalman::cli
