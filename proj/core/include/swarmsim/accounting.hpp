#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swarmsim/address.hpp"
#include "swarmsim/routing.hpp"

namespace swarmsim {

/// How the originator's payment to the first hop is priced.
class PricingMode {
 public:
  enum class Kind { xor_remaining, proximity_step, constant };

  constexpr PricingMode() = default;

  static constexpr PricingMode xor_remaining() { return PricingMode(Kind::xor_remaining, 0); }
  static constexpr PricingMode proximity_step() { return PricingMode(Kind::proximity_step, 0); }
  static constexpr PricingMode constant(std::uint64_t c) { return PricingMode(Kind::constant, c); }

  /// Accepts "xor-remaining", "proximity-step" or "constant:<c>".
  static PricingMode parse(std::string_view text);
  std::string to_string() const;

  constexpr Kind kind() const noexcept { return kind_; }
  constexpr std::uint64_t constant_price() const noexcept { return constant_; }

  friend constexpr bool operator==(const PricingMode&, const PricingMode&) = default;

 private:
  constexpr PricingMode(Kind kind, std::uint64_t c) : kind_(kind), constant_(c) {}

  Kind kind_ = Kind::xor_remaining;
  std::uint64_t constant_ = 0;
};

constexpr std::uint64_t price_raw(std::uint64_t first_hop, std::uint64_t chunk, unsigned bits,
                                  const PricingMode& mode) noexcept {
  switch (mode.kind()) {
    case PricingMode::Kind::xor_remaining:
      return first_hop ^ chunk;
    case PricingMode::Kind::proximity_step:
      return bits - proximity_order_raw(first_hop, chunk, bits);
    case PricingMode::Kind::constant:
      return mode.constant_price();
  }
  return 0;
}

std::uint64_t price(Address first_hop, Address chunk, const PricingMode& mode);

struct PaymentEvent {
  Address payer;
  Address payee;
  std::uint64_t amount = 0;

  friend bool operator==(const PaymentEvent&, const PaymentEvent&) = default;
};

/// Cumulative cheque: `cumulative_amount` is everything `issuer` has paid
/// `beneficiary` up to and including `step`.
struct ChequeRecord {
  Address issuer;
  Address beneficiary;
  std::uint64_t cumulative_amount = 0;
  std::uint64_t step = 0;

  friend bool operator==(const ChequeRecord&, const ChequeRecord&) = default;
};

struct LedgerSettings {
  /// Pair is frozen once |balance| reaches this; disabled when empty.
  std::optional<std::uint64_t> payment_threshold;
  /// Units per step by which every unsettled balance decays toward zero.
  std::uint64_t amortization_rate = 0;

  friend bool operator==(const LedgerSettings&, const LedgerSettings&) = default;
};

enum class ThresholdState { ok, frozen };

/// Unsettled balance on an unordered pair, stored as balance(low, high).
struct BalanceEntry {
  Address low;
  Address high;
  std::int64_t balance = 0;

  friend bool operator==(const BalanceEntry&, const BalanceEntry&) = default;
};

/// Latest cheque on an (issuer, beneficiary) pair plus how many were written.
struct ChequeSummary {
  Address issuer;
  Address beneficiary;
  std::uint64_t cumulative_amount = 0;
  std::uint64_t last_step = 0;
  std::uint64_t count = 0;

  friend bool operator==(const ChequeSummary&, const ChequeSummary&) = default;
};

/// Sorted, serializable view of a ledger's pairwise state.
struct LedgerSnapshot {
  std::vector<BalanceEntry> balances;
  std::vector<ChequeSummary> cheques;

  friend bool operator==(const LedgerSnapshot&, const LedgerSnapshot&) = default;
};

/// SWAP bookkeeping for one run. balance(a, b) > 0 means b owes a; the
/// store keeps one signed value per unordered pair so balance(a, b) ==
/// -balance(b, a) always holds.
class SwapLedger {
 public:
  explicit SwapLedger(unsigned bits, LedgerSettings settings = {});

  const LedgerSettings& settings() const noexcept { return settings_; }
  unsigned bits() const noexcept { return bits_; }

  std::int64_t balance(Address a, Address b) const;
  std::uint64_t income(Address node) const;
  std::uint64_t paid(Address node) const;
  std::uint64_t total_income() const noexcept { return total_income_; }
  std::uint64_t total_paid() const noexcept { return total_paid_; }
  std::uint64_t paid_between(Address issuer, Address beneficiary) const;

  /// Posts one chunk delivery along `path`. The originator pays the first
  /// hop (settled immediately); every later hop adds one unsettled unit owed
  /// by the requesting node to the node that served it. Returns the payment,
  /// or nullopt for a zero-hop path.
  std::optional<PaymentEvent> apply_download(const Path& path, Address chunk, const PricingMode& mode);

  void amortize(std::uint64_t steps);

  ThresholdState check_threshold(Address a, Address b) const;

  /// Writes a cumulative cheque for everything paid on the pair so far;
  /// nullopt when nothing is left to settle.
  std::optional<ChequeRecord> issue_cheque(Address issuer, Address beneficiary, std::uint64_t step);

  const std::vector<ChequeRecord>& cheques() const noexcept { return cheques_; }

  LedgerSnapshot snapshot() const;

  // Raw-value entry points for the simulation loop.
  void pay(std::uint64_t payer, std::uint64_t payee, std::uint64_t amount);
  void add_unsettled(std::uint64_t provider, std::uint64_t consumer, std::int64_t units);
  std::int64_t balance_raw(std::uint64_t a, std::uint64_t b) const noexcept;
  ThresholdState check_threshold_raw(std::uint64_t a, std::uint64_t b) const noexcept;

 private:
  static std::uint64_t pair_key(std::uint64_t a, std::uint64_t b) noexcept { return (a << 32) | b; }
  void require_width(Address a) const;

  unsigned bits_;
  LedgerSettings settings_;
  std::unordered_map<std::uint64_t, std::int64_t> balances_;
  std::unordered_map<std::uint64_t, std::uint64_t> income_;
  std::unordered_map<std::uint64_t, std::uint64_t> paid_;
  std::unordered_map<std::uint64_t, std::uint64_t> paid_pairs_;
  std::unordered_map<std::uint64_t, std::uint64_t> cheque_cursor_;
  std::vector<ChequeRecord> cheques_;
  std::uint64_t total_income_ = 0;
  std::uint64_t total_paid_ = 0;
};

}  // namespace swarmsim
