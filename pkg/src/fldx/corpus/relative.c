/* Relative error of a quotient whose numerator nearly cancels. */
int main() {
  double x = read_double(2.0, 3.0);
  double y = read_double(1.0, 1.5);
  double z = (x - y) / (x + y);
  /*@ accuracy_assert_drelerr(z, -1e-12, 1e-12); */
  /*@ dprint(z); */
  return 0;
}
