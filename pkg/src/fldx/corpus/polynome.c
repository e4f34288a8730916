/* Cubic polynomial evaluated in expanded form; products amplify the
   input uncertainty and add their own roundings. */
int main() {
  double x = read_double(0.0, 1.0);
  double t = x * x * x - 2.0 * x * x + 3.0 * x - 1.0;
  /*@ accuracy_assert_derr(t, -1e-14, 1e-14); */
  /*@ dprint(t); */
  return 0;
}
