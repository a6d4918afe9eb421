// Copyright 2026 The lulu Authors.
//
// Use of this source code is governed by the Apache License 2.0
// that can be found in the LICENSE file.

// Command-line front end: filter, decompose, reconstruct, histogram,
// noise-sim, verify. Exit codes: 0 success, 1 usage or parse failure,
// 2 invariant violation.

#include <array>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lulu/lulu.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvariant = 2;

lulu::Connectivity connectivity_from_id(int id) {
  return id == 8 ? lulu::Connectivity::eight() : lulu::Connectivity::four();
}

lulu::OpCode code_from_name(const std::string& name) {
  if (name == "ln") return lulu::OpCode::ln;
  if (name == "un") return lulu::OpCode::un;
  if (name == "lnun") return lulu::OpCode::lnun;
  return lulu::OpCode::unln;
}

const char* code_name(lulu::OpCode code) {
  switch (code) {
    case lulu::OpCode::ln: return "L";
    case lulu::OpCode::un: return "U";
    case lulu::OpCode::lnun: return "LU";
    case lulu::OpCode::unln: return "UL";
  }
  return "?";
}

lulu::PgmWriteMode mode_from_name(const std::string& name) {
  return name == "offset" ? lulu::PgmWriteMode::offset : lulu::PgmWriteMode::clip;
}

void note_write(const lulu::PgmWriteInfo& info, const std::string& path) {
  if (info.clipped > 0)
    std::cerr << "warning: " << info.clipped << " sample(s) clamped writing " << path
              << "\n";
  if (info.offset != 0)
    std::cerr << "note: samples shifted by " << info.offset << " writing " << path
              << " (see " << path << ".json)\n";
}

int run_filter(const std::string& in, const std::string& out, const std::string& op,
               int n, int conn_id, const std::string& mode) {
  const lulu::GridImage f = lulu::read_pgm(in);
  const lulu::Connectivity conn = connectivity_from_id(conn_id);
  const lulu::OperatorKind kind{code_from_name(op), n};

  const lulu::GridImage g = lulu::apply(kind, f, conn);
  const lulu::PgmWriteInfo info = lulu::write_pgm(g, out, mode_from_name(mode));
  note_write(info, out);

  const lulu::TvReport tv = lulu::verify_preservation(f, kind, conn);
  std::cout << lulu::to_string(kind) << " applied to " << f.width() << "x"
            << f.height() << " image\n";
  std::cout << "total variation: " << tv.tv_input << (tv.preserved ? " = " : " != ")
            << tv.tv_operator_part << " + " << tv.tv_residual_part
            << " (input vs output + residual)\n";
  if (!tv.preserved) {
    std::cerr << "error: total variation not preserved\n";
    return kExitInvariant;
  }
  return kExitOk;
}

int run_decompose(const std::string& in, const std::string& out, int max_n,
                  int conn_id) {
  const lulu::GridImage f = lulu::read_pgm(in);
  const lulu::Connectivity conn = connectivity_from_id(conn_id);

  std::optional<int> cap;
  if (max_n > 0) cap = max_n;
  const lulu::DptDecomposition d = lulu::dpt_decompose(f, conn, cap);
  lulu::write_pulses(d, out);

  for (const auto& [size, list] : d.layers)
    std::cout << "size " << size << ": " << list.size() << "\n";
  std::cout << "pulses: " << d.pulse_count() << "\n";

  bool ok = true;
  const lulu::StructureReport report = lulu::verify_structure(d, f);
  for (const lulu::StructureCheck& check : report.checks) {
    if (!check.pass) {
      std::cerr << "error: " << check.name << ": " << check.detail << "\n";
      ok = false;
    }
  }

  if (d.complete) {
    const lulu::DptTvReport tv = lulu::verify_dpt_tv(d, f);
    std::cout << "total variation: " << tv.tv_input
              << (tv.preserved ? " = " : " != ") << tv.pulse_tv_total
              << " (input vs pulse sum)\n";
    if (!tv.preserved) {
      std::cerr << "error: total variation not additive over pulses\n";
      ok = false;
    }
  } else {
    const std::string side = out + ".residual.pgm";
    const lulu::PgmWriteInfo info =
        lulu::write_pgm(*d.residual, side, lulu::PgmWriteMode::offset);
    note_write(info, side);
    std::cerr << "warning: decomposition incomplete at layer " << max_n
              << "; residual written to " << side << "\n";
  }
  return ok ? kExitOk : kExitInvariant;
}

int run_reconstruct(const std::string& in, const std::string& out, int min_size,
                    int max_size, const std::string& sign, bool include_residual,
                    const std::string& residual_image, const std::string& mode) {
  if (max_size > 0 && max_size < min_size) {
    std::cerr << "error: --max-size must be at least --min-size\n";
    return kExitUsage;
  }
  lulu::DptDecomposition d = lulu::read_pulses(in);
  if (!d.complete && !residual_image.empty())
    d.residual = lulu::read_pgm(residual_image);
  if (!d.complete && include_residual && !d.residual) {
    std::cerr << "error: dump is incomplete; pass --residual-image or "
                 "--no-residual\n";
    return kExitUsage;
  }

  const auto admit = [&](const lulu::Pulse& p) {
    const int size = static_cast<int>(p.support.size());
    if (size < min_size) return false;
    if (max_size > 0 && size > max_size) return false;
    if (sign == "pos" && p.amplitude < 0) return false;
    if (sign == "neg" && p.amplitude > 0) return false;
    return true;
  };

  std::int64_t selected = 0;
  for (const auto& [size, list] : d.layers)
    for (const lulu::Pulse& p : list)
      if (admit(p)) ++selected;

  const lulu::GridImage g = lulu::reconstruct(d, admit, include_residual);
  const lulu::PgmWriteInfo info = lulu::write_pgm(g, out, mode_from_name(mode));
  note_write(info, out);

  std::cout << "pulses selected: " << selected << " of " << d.pulse_count() << "\n";
  if (selected == 0)
    std::cerr << "warning: no pulses matched the selection; output carries only "
                 "the residual part\n";
  return kExitOk;
}

int run_histogram(const std::string& in, const std::string& out) {
  const lulu::DptDecomposition d = lulu::read_pulses(in);
  lulu::write_histogram(lulu::pulse_histogram(d), out);
  std::cout << "pulses: " << d.pulse_count() << "\n";
  return kExitOk;
}

int run_noise_sim(int width, int height, std::uint64_t seed,
                  const std::string& report, int conn_id, int small_threshold,
                  int large_threshold, const std::string& save_image) {
  const lulu::GridImage f = lulu::noise_image(height, width, seed);
  if (!save_image.empty()) {
    const lulu::PgmWriteInfo info = lulu::write_pgm(f, save_image);
    note_write(info, save_image);
  }

  const lulu::Connectivity conn = connectivity_from_id(conn_id);
  const lulu::DptDecomposition d = lulu::dpt_decompose(f, conn);
  const auto hist = lulu::pulse_histogram(d);
  if (!report.empty()) lulu::write_histogram(hist, report);

  std::int64_t total = 0;
  std::int64_t small = 0;
  std::int64_t large = 0;
  for (const auto& [size, count] : hist) {
    total += count;
    if (size <= small_threshold) small += count;
    if (size > large_threshold) large += count;
  }

  std::cout << "image: " << width << "x" << height << ", seed " << seed
            << ", connectivity " << conn_id << "\n";
  std::cout << "pulses: " << total << "\n";
  const double denom = total > 0 ? static_cast<double>(total) : 1.0;
  std::cout << std::fixed << std::setprecision(4);
  std::cout << "fraction size <= " << small_threshold << ": "
            << static_cast<double>(small) / denom << "\n";
  std::cout << "fraction size > " << large_threshold << ": "
            << static_cast<double>(large) / denom << "\n";
  return kExitOk;
}

// Operator application used by `verify`. The hidden fault hook corrupts the
// upper smoother so the report shows which identities catch it.
lulu::GridImage apply_checked(lulu::OpCode code, int n, const lulu::GridImage& f,
                              const lulu::Connectivity& conn, bool fault) {
  switch (code) {
    case lulu::OpCode::ln:
      return lulu::apply_ln(f, n, conn);
    case lulu::OpCode::un: {
      lulu::GridImage g = lulu::apply_un(f, n, conn);
      if (fault) {
        int& v = g.at(g.height() / 2, g.width() / 2);
        v = 2 * v + 1;
      }
      return g;
    }
    case lulu::OpCode::lnun:
      return apply_checked(lulu::OpCode::ln, n,
                           apply_checked(lulu::OpCode::un, n, f, conn, fault), conn,
                           fault);
    case lulu::OpCode::unln:
      return apply_checked(lulu::OpCode::un, n,
                           apply_checked(lulu::OpCode::ln, n, f, conn, fault), conn,
                           fault);
  }
  throw std::logic_error("unreachable operator code");
}

bool pointwise_le(const lulu::GridImage& a, const lulu::GridImage& b) {
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i)
    if (va[i] > vb[i]) return false;
  return true;
}

int run_verify(const std::string& in, int conn_id, bool fault) {
  const lulu::GridImage f = lulu::read_pgm(in);
  const lulu::Connectivity conn = connectivity_from_id(conn_id);
  constexpr std::array<lulu::OpCode, 4> kCodes = {
      lulu::OpCode::ln, lulu::OpCode::un, lulu::OpCode::lnun, lulu::OpCode::unln};

  struct Row {
    std::string name;
    std::array<bool, 3> pass;
  };
  std::vector<Row> rows;
  const auto add_row = [&rows](std::string name, auto&& check) {
    Row row{std::move(name), {}};
    for (int i = 0; i < 3; ++i) row.pass[i] = check(i + 1);
    rows.push_back(std::move(row));
  };
  const auto op = [&](lulu::OpCode code, int n, const lulu::GridImage& g) {
    return apply_checked(code, n, g, conn, fault);
  };

  add_row("order chain L <= UL <= LU <= U", [&](int n) {
    const lulu::GridImage ln = op(lulu::OpCode::ln, n, f);
    const lulu::GridImage un = op(lulu::OpCode::un, n, f);
    const lulu::GridImage unln = op(lulu::OpCode::unln, n, f);
    const lulu::GridImage lnun = op(lulu::OpCode::lnun, n, f);
    return pointwise_le(ln, unln) && pointwise_le(unln, lnun) &&
           pointwise_le(lnun, un);
  });

  for (lulu::OpCode code : kCodes) {
    add_row(std::string("idempotence ") + code_name(code), [&, code](int n) {
      const lulu::GridImage once = op(code, n, f);
      return op(code, n, once) == once;
    });
  }

  for (lulu::OpCode code : {lulu::OpCode::ln, lulu::OpCode::un}) {
    add_row(std::string("co-idempotence ") + code_name(code), [&, code](int n) {
      const lulu::GridImage res = f - op(code, n, f);
      return res - op(code, n, res) == res;
    });
  }

  for (lulu::OpCode outer : kCodes) {
    for (lulu::OpCode inner : kCodes) {
      const lulu::OpCode product = lulu::compose_code(outer, inner);
      std::string name = std::string("semigroup ") + code_name(outer) + "*" +
                         code_name(inner) + " = " + code_name(product);
      add_row(std::move(name), [&, outer, inner, product](int n) {
        return op(product, n, f) == op(outer, n, op(inner, n, f));
      });
    }
  }

  for (lulu::OpCode code : kCodes) {
    add_row(std::string("tv preservation ") + code_name(code), [&, code](int n) {
      const lulu::GridImage g = op(code, n, f);
      return lulu::total_variation(f) ==
             lulu::total_variation(g) + lulu::total_variation(f - g);
    });
  }

  std::size_t width = 0;
  for (const Row& row : rows) width = std::max(width, row.name.size());
  std::cout << std::left << std::setw(static_cast<int>(width) + 2) << "check"
            << "n=1   n=2   n=3\n";
  int failures = 0;
  for (const Row& row : rows) {
    std::cout << std::left << std::setw(static_cast<int>(width) + 2) << row.name;
    for (int i = 0; i < 3; ++i) {
      std::cout << (row.pass[i] ? "pass" : "FAIL") << (i < 2 ? "  " : "");
      if (!row.pass[i]) ++failures;
    }
    std::cout << "\n";
  }

  const lulu::DptDecomposition d = lulu::dpt_decompose(f, conn);
  const lulu::StructureReport report = lulu::verify_structure(d, f);
  for (const lulu::StructureCheck& check : report.checks) {
    std::cout << "dpt " << check.name << ": " << (check.pass ? "pass" : "FAIL")
              << "\n";
    if (!check.pass) {
      std::cerr << "error: " << check.name << ": " << check.detail << "\n";
      ++failures;
    }
  }
  const lulu::DptTvReport tv = lulu::verify_dpt_tv(d, f);
  std::cout << "dpt tv-additivity: " << (tv.preserved ? "pass" : "FAIL") << "\n";
  if (!tv.preserved) ++failures;

  if (failures > 0) {
    std::cout << "result: FAIL (" << failures << " check(s) failed)\n";
    return kExitInvariant;
  }
  std::cout << "result: PASS\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LULU smoothers and the discrete pulse transform on integer grids"};
  app.require_subcommand(1);
  int rc = kExitOk;

  // filter
  std::string fl_in, fl_out, fl_op;
  int fl_n = 1;
  int fl_conn = 4;
  std::string fl_mode = "clip";
  CLI::App* filter = app.add_subcommand(
      "filter", "Apply a smoother to a PGM image and report total variation");
  filter->add_option("input", fl_in, "input PGM")->required();
  filter->add_option("output", fl_out, "output PGM")->required();
  filter->add_option("--op", fl_op, "operator: ln, un, lnun (L after U), unln")
      ->required()
      ->check(CLI::IsMember({"ln", "un", "lnun", "unln"}));
  filter->add_option("-n,--n", fl_n, "scale: sets removed up to this size")
      ->required()
      ->check(CLI::PositiveNumber);
  filter->add_option("--connectivity", fl_conn, "neighbor relation (4 or 8)")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  filter->add_option("--mode", fl_mode, "out-of-range handling: clip or offset")
      ->check(CLI::IsMember({"clip", "offset"}))
      ->capture_default_str();
  filter->callback(
      [&]() { rc = run_filter(fl_in, fl_out, fl_op, fl_n, fl_conn, fl_mode); });

  // decompose
  std::string dc_in, dc_out;
  int dc_max_n = 0;
  int dc_conn = 4;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "Compute the discrete pulse transform and dump the pulses");
  decompose->add_option("input", dc_in, "input PGM")->required();
  decompose->add_option("output", dc_out, "output pulse dump (JSON lines)")
      ->required();
  decompose
      ->add_option("--max-n", dc_max_n,
                   "stop after this layer (0 = run to completion)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  decompose->add_option("--connectivity", dc_conn, "neighbor relation (4 or 8)")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  decompose->callback([&]() { rc = run_decompose(dc_in, dc_out, dc_max_n, dc_conn); });

  // reconstruct
  std::string rc_in, rc_out;
  int rc_min = 1;
  int rc_max = 0;
  std::string rc_sign = "both";
  bool rc_residual = true;
  std::string rc_residual_image;
  std::string rc_mode = "clip";
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct",
      "Sum selected pulses back into an image (e.g. --min-size 21, or "
      "--min-size 21 --max-size 400, or --min-size 30000 --max-size 50000)");
  reconstruct->add_option("pulses", rc_in, "pulse dump from decompose")->required();
  reconstruct->add_option("output", rc_out, "output PGM")->required();
  reconstruct->add_option("--min-size", rc_min, "smallest pulse support to keep")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  reconstruct
      ->add_option("--max-size", rc_max,
                   "largest pulse support to keep (0 = unbounded)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  reconstruct->add_option("--sign", rc_sign, "keep pos, neg, or both pulse signs")
      ->check(CLI::IsMember({"pos", "neg", "both"}))
      ->capture_default_str();
  reconstruct->add_flag("--include-residual,!--no-residual", rc_residual,
                        "add the residual part back (default on)");
  reconstruct
      ->add_option("--residual-image", rc_residual_image,
                   "residual PGM for dumps from an interrupted decompose")
      ->check(CLI::ExistingFile);
  reconstruct->add_option("--mode", rc_mode, "out-of-range handling: clip or offset")
      ->check(CLI::IsMember({"clip", "offset"}))
      ->capture_default_str();
  reconstruct->callback([&]() {
    rc = run_reconstruct(rc_in, rc_out, rc_min, rc_max, rc_sign, rc_residual,
                         rc_residual_image, rc_mode);
  });

  // histogram
  std::string hg_in, hg_out;
  CLI::App* histogram = app.add_subcommand(
      "histogram", "Write the pulse-size histogram of a dump as CSV");
  histogram->add_option("pulses", hg_in, "pulse dump from decompose")->required();
  histogram->add_option("output", hg_out, "output CSV")->required();
  histogram->callback([&]() { rc = run_histogram(hg_in, hg_out); });

  // noise-sim
  int ns_width = 400;
  int ns_height = 300;
  std::uint64_t ns_seed = 1;
  std::string ns_report;
  int ns_conn = 4;
  int ns_small = 20;
  int ns_large = 100;
  std::string ns_save;
  CLI::App* noise = app.add_subcommand(
      "noise-sim",
      "Decompose seeded uniform noise and report pulse-size statistics");
  noise->add_option("--width", ns_width, "image width")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise->add_option("--height", ns_height, "image height")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise->add_option("--seed", ns_seed, "PRNG seed")->capture_default_str();
  noise->add_option("--report", ns_report, "write the size histogram CSV here");
  noise->add_option("--connectivity", ns_conn, "neighbor relation (4 or 8)")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  noise
      ->add_option("--small-threshold", ns_small,
                   "report the fraction of pulses with size <= this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise
      ->add_option("--large-threshold", ns_large,
                   "report the fraction of pulses with size > this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  noise->add_option("--save-image", ns_save, "also write the noise image as PGM");
  noise->callback([&]() {
    rc = run_noise_sim(ns_width, ns_height, ns_seed, ns_report, ns_conn, ns_small,
                       ns_large, ns_save);
  });

  // verify
  std::string vf_in;
  int vf_conn = 4;
  bool vf_fault = false;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the operator identity suite on an image for n = 1..3");
  verify->add_option("input", vf_in, "input PGM")->required();
  verify->add_option("--connectivity", vf_conn, "neighbor relation (4 or 8)")
      ->check(CLI::IsMember({4, 8}))
      ->capture_default_str();
  verify->add_flag("--inject-fault", vf_fault)->group("");  // hidden test hook
  verify->callback([&]() { rc = run_verify(vf_in, vf_conn, vf_fault); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return rc;
}
