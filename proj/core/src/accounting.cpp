#include "swarmsim/accounting.hpp"

#include <algorithm>
#include <charconv>
#include <map>

namespace swarmsim {

PricingMode PricingMode::parse(std::string_view text) {
  if (text == "xor-remaining") return xor_remaining();
  if (text == "proximity-step") return proximity_step();
  constexpr std::string_view prefix = "constant:";
  if (text.starts_with(prefix)) {
    const std::string_view digits = text.substr(prefix.size());
    std::uint64_t c = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
      return constant(c);
    }
  }
  throw InvalidArgument("unknown pricing mode '" + std::string(text) +
                        "' (expected xor-remaining, proximity-step or constant:<c>)");
}

std::string PricingMode::to_string() const {
  switch (kind_) {
    case Kind::xor_remaining:
      return "xor-remaining";
    case Kind::proximity_step:
      return "proximity-step";
    case Kind::constant:
      return "constant:" + std::to_string(constant_);
  }
  return {};
}

std::uint64_t price(Address first_hop, Address chunk, const PricingMode& mode) {
  if (first_hop.bits() != chunk.bits()) throw InvalidArgument("address widths differ");
  return price_raw(first_hop.value(), chunk.value(), first_hop.bits(), mode);
}

SwapLedger::SwapLedger(unsigned bits, LedgerSettings settings) : bits_(bits), settings_(settings) {
  if (bits < 1 || bits > 32) {
    throw InvalidArgument("ledger supports address widths of 1..32 bits");
  }
}

void SwapLedger::require_width(Address a) const {
  if (a.bits() != bits_) throw InvalidArgument("address width does not match ledger");
}

std::int64_t SwapLedger::balance_raw(std::uint64_t a, std::uint64_t b) const noexcept {
  if (a == b) return 0;
  const bool flipped = b < a;
  auto it = balances_.find(flipped ? pair_key(b, a) : pair_key(a, b));
  if (it == balances_.end()) return 0;
  return flipped ? -it->second : it->second;
}

std::int64_t SwapLedger::balance(Address a, Address b) const {
  require_width(a);
  require_width(b);
  return balance_raw(a.value(), b.value());
}

std::uint64_t SwapLedger::income(Address node) const {
  require_width(node);
  auto it = income_.find(node.value());
  return it == income_.end() ? 0 : it->second;
}

std::uint64_t SwapLedger::paid(Address node) const {
  require_width(node);
  auto it = paid_.find(node.value());
  return it == paid_.end() ? 0 : it->second;
}

std::uint64_t SwapLedger::paid_between(Address issuer, Address beneficiary) const {
  require_width(issuer);
  require_width(beneficiary);
  auto it = paid_pairs_.find(pair_key(issuer.value(), beneficiary.value()));
  return it == paid_pairs_.end() ? 0 : it->second;
}

void SwapLedger::pay(std::uint64_t payer, std::uint64_t payee, std::uint64_t amount) {
  // The service debt balance(payee, payer) += amount is settled in the same
  // instant, so the pair balance is left untouched.
  income_[payee] += amount;
  paid_[payer] += amount;
  paid_pairs_[pair_key(payer, payee)] += amount;
  total_income_ += amount;
  total_paid_ += amount;
}

void SwapLedger::add_unsettled(std::uint64_t provider, std::uint64_t consumer, std::int64_t units) {
  if (provider == consumer || units == 0) return;
  if (provider < consumer) {
    balances_[pair_key(provider, consumer)] += units;
  } else {
    balances_[pair_key(consumer, provider)] -= units;
  }
}

std::optional<PaymentEvent> SwapLedger::apply_download(const Path& path, Address chunk,
                                                       const PricingMode& mode) {
  if (path.hops.empty()) throw InvalidArgument("apply_download on an empty path");
  require_width(chunk);
  for (Address hop : path.hops) require_width(hop);
  if (path.size() < 2) return std::nullopt;

  const Address originator = path.hops[0];
  const Address first_hop = path.hops[1];
  const std::uint64_t amount = price_raw(first_hop.value(), chunk.value(), bits_, mode);
  pay(originator.value(), first_hop.value(), amount);
  for (std::size_t j = 1; j + 1 < path.size(); ++j) {
    add_unsettled(path.hops[j + 1].value(), path.hops[j].value(), 1);
  }
  return PaymentEvent{originator, first_hop, amount};
}

void SwapLedger::amortize(std::uint64_t steps) {
  const std::uint64_t rate = settings_.amortization_rate;
  if (rate == 0 || steps == 0) return;
  const std::uint64_t budget = rate > ~std::uint64_t{0} / steps ? ~std::uint64_t{0} : rate * steps;
  for (auto it = balances_.begin(); it != balances_.end();) {
    std::int64_t& b = it->second;
    const std::uint64_t magnitude = b < 0 ? 0 - static_cast<std::uint64_t>(b) : static_cast<std::uint64_t>(b);
    if (magnitude <= budget) {
      it = balances_.erase(it);
      continue;
    }
    const auto cut = static_cast<std::int64_t>(budget);
    b = b > 0 ? b - cut : b + cut;
    ++it;
  }
}

ThresholdState SwapLedger::check_threshold_raw(std::uint64_t a, std::uint64_t b) const noexcept {
  if (!settings_.payment_threshold) return ThresholdState::ok;
  const std::int64_t bal = balance_raw(a, b);
  const std::uint64_t magnitude = bal < 0 ? 0 - static_cast<std::uint64_t>(bal) : static_cast<std::uint64_t>(bal);
  return magnitude >= *settings_.payment_threshold ? ThresholdState::frozen : ThresholdState::ok;
}

ThresholdState SwapLedger::check_threshold(Address a, Address b) const {
  require_width(a);
  require_width(b);
  return check_threshold_raw(a.value(), b.value());
}

std::optional<ChequeRecord> SwapLedger::issue_cheque(Address issuer, Address beneficiary,
                                                     std::uint64_t step) {
  const std::uint64_t total = paid_between(issuer, beneficiary);
  std::uint64_t& cursor = cheque_cursor_[pair_key(issuer.value(), beneficiary.value())];
  if (total <= cursor) return std::nullopt;
  cursor = total;
  cheques_.push_back(ChequeRecord{issuer, beneficiary, total, step});
  return cheques_.back();
}

LedgerSnapshot SwapLedger::snapshot() const {
  LedgerSnapshot snap;
  constexpr std::uint64_t kLow = 0xffffffffULL;
  for (const auto& [key, value] : balances_) {
    if (value == 0) continue;
    snap.balances.push_back(BalanceEntry{Address(key >> 32, bits_), Address(key & kLow, bits_), value});
  }
  std::sort(snap.balances.begin(), snap.balances.end(), [](const BalanceEntry& x, const BalanceEntry& y) {
    return std::tie(x.low, x.high) < std::tie(y.low, y.high);
  });

  std::map<std::pair<Address, Address>, ChequeSummary> by_pair;
  for (const ChequeRecord& c : cheques_) {
    ChequeSummary& s = by_pair[{c.issuer, c.beneficiary}];
    s.issuer = c.issuer;
    s.beneficiary = c.beneficiary;
    s.cumulative_amount = std::max(s.cumulative_amount, c.cumulative_amount);
    s.last_step = std::max(s.last_step, c.step);
    ++s.count;
  }
  snap.cheques.reserve(by_pair.size());
  for (auto& [pair, summary] : by_pair) snap.cheques.push_back(summary);
  return snap;
}

}  // namespace swarmsim
