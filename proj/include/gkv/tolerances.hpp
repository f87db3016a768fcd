#ifndef GKV_TOLERANCES_HPP
#define GKV_TOLERANCES_HPP

namespace gkv {

// Central tolerance configuration. Algebraic identities get the tight
// default; anything that differentiates a field gets the looser one.
struct Tolerances {
  double algebraic = 1e-10;
  double derivative = 1e-8;
  double cluster = 1e-6;       // eigenvalue clustering width
  double margin = 1e-6;        // guard for 1/(1 +- a) style denominators
  double scalar_regime = 1e-8; // || Sigma + 2a Id || threshold
};

}  // namespace gkv

#endif
