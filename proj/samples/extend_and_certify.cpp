// Samples a uniformly de Bruijn prefix on the middle-thirds Cantor digits,
// prints its orders, then certifies it against every rational of small height.

#include <cstdlib>
#include <iostream>

#include "dbseq/extension.hpp"
#include "dbseq/symbolic.hpp"

int main(int argc, char** argv) {
  using namespace dbseq;
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 1;
  const DigitSystem cantor(3, {0, 2});

  const SampleResult r = sample_uniform_debruijn(ExtensionSpec::defaults(cantor), least_debruijn_word(cantor, 1), 3, seed);
  const OrderSet orders = debruijn_orders(r.word, cantor);
  std::cout << "prefix length " << r.word.size() << ", orders";
  for (int n : orders.orders) std::cout << ' ' << n;
  std::cout << '\n';

  const BACertificate cert = verify_badly_approximable(r.word, make_ifs(cantor), 702);
  std::cout << "kappa " << to_decimal(cert.kappa) << ", " << cert.records.size() << " rationals checked, "
            << (cert.verdict ? "pass" : "fail") << '\n';

  // Tightest record.
  const BARecord* tight = nullptr;
  for (const auto& rec : cert.records) {
    if (!tight || rec.margin / rec.rhs < tight->margin / tight->rhs) tight = &rec;
  }
  if (tight) {
    std::cout << "closest: " << to_decimal(tight->r) << " = " << format_expansion(tight->expansion)
              << ", distance/bound = " << static_cast<double>(to_real(tight->lower_bound) / tight->rhs) << '\n';
  }
  return cert.verdict ? 0 : 1;
}
