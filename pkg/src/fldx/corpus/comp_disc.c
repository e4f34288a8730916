/* Discontinuous conditional around an unstable test: when the float
   and real controls diverge near 1.0, the result jumps by 0.5. The
   accuracy assertion cannot hold there and must raise an alarm. */
int main() {
  double x = read_double(0.9999999, 1.0000001);
  double z;
  if (x < 1.0) {
    z = x + 0.5;
  } else {
    z = x;
  }
  /*@ accuracy_assert_derr(z, -1e-6, 1e-6); */
  /*@ dprint(z); */
  return 0;
}
