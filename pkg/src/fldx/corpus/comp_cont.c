/* Continuous piecewise function: the branch is unstable near 1.0 but
   both sides agree there (2x = x + 1 at x = 1), so the error stays
   small and the assertion holds. */
int main() {
  double x = read_double(0.9999999, 1.0000001);
  double z;
  if (x < 1.0) {
    z = 2.0 * x;
  } else {
    z = x + 1.0;
  }
  /*@ accuracy_assert_derr(z, -1e-5, 1e-5); */
  /*@ dprint(z); */
  return 0;
}
