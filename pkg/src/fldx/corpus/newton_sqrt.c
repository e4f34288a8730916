/* Square root by three unrolled Newton steps from a fixed seed; pure
   arithmetic, so the error budget is a handful of roundings. */
int main() {
  double x = read_double(4.0, 6.25);
  double r = 2.25;
  r = 0.5 * (r + x / r);
  r = 0.5 * (r + x / r);
  r = 0.5 * (r + x / r);
  /*@ accuracy_assert_derr(r, -1e-12, 1e-12); */
  /*@ dprint(r); */
  return 0;
}
