#pragma once

#include "fpv/condcode.hpp"
#include "fpv/format.hpp"
#include "fpv/smt.hpp"
#include "fpv/transform.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fpv::testing {

/// Outcome of comparing one encoded operation against the oracle.
struct DiffResult {
  uint64_t pairs = 0;      // operand combinations evaluated
  uint64_t mismatches = 0;
  std::vector<std::string> examples; // first few mismatches
  std::string error;

  bool ok() const { return error.empty() && mismatches == 0 && pairs > 0; }
};

/// Compares fpsem encodings with the MiniFloat oracle inside one incremental
/// solver session. Each encoding is defined once as an SMT function of its
/// operands; the solver then evaluates it on literal operands in batches of
/// `get-value` requests.
class EncodingDifferential {
public:
  EncodingDifferential(FPFormat f, const std::string &solver_command,
                       double timeout_s = 600);
  ~EncodingDifferential();
  EncodingDifferential(const EncodingDifferential &) = delete;
  EncodingDifferential &operator=(const EncodingDifferential &) = delete;

  /// fadd fsub fmul fdiv frem, or fcmp with `cc`, on the given bit-pattern
  /// pairs; every pattern pair when `pairs` is empty.
  DiffResult binary(Opcode op, std::optional<CondCode> cc = std::nullopt,
                    std::vector<std::pair<uint64_t, uint64_t>> pairs = {});

  /// fabs on every bit pattern.
  DiffResult fabs();

  /// fptosi/fptoui to `width` bits on every FP pattern. Where the oracle is
  /// undefined the encoding must yield its fresh value.
  DiffResult to_int(Opcode op, unsigned width);

  /// sitofp/uitofp from every `width`-bit pattern.
  DiffResult from_int(Opcode op, unsigned width);

  /// fpext/fptrunc from every pattern of this format to `dst`.
  DiffResult resize(Opcode op, const FPFormat &dst);

  struct Session;

private:
  std::unique_ptr<Session> s_;
  FPFormat f_;
};

/// `n` distinct pseudo-random pattern pairs of a `width`-bit format.
std::vector<std::pair<uint64_t, uint64_t>> sample_pairs(unsigned width,
                                                        size_t n,
                                                        uint64_t seed);

/// Whether a closed-over Bool term is valid (its negation unsat); nullopt
/// when the solver gives no answer.
std::optional<bool> solver_proves(const Term &t, const SolverConfig &cfg);

/// $FPV_SOLVER or z3, 120 s.
SolverConfig test_solver();

} // namespace fpv::testing
