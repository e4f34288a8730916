/* Floating-point addition is not associative: the grouping changes
   which rounding errors are committed. */
int main() {
  double a = read_double(1.0, 2.0);
  double b = read_double(-2.0, -1.0);
  double c = read_double(0.001, 0.002);
  double u = (a + b) + c;
  double v = a + (b + c);
  /*@ accuracy_assert_derr(u, -1e-15, 1e-15); */
  /*@ accuracy_assert_derr(v, -1e-15, 1e-15); */
  /*@ dprint(u); */
  return 0;
}
