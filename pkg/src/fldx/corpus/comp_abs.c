/* Absolute value via a branch: unstable near zero but continuous, so
   crossing flows contribute only a tiny error. */
int main() {
  double x = read_double(-0.0000001, 0.0000001);
  double z;
  if (x < 0.0) {
    z = 0.0 - x;
  } else {
    z = x;
  }
  /*@ accuracy_assert_derr(z, -1e-5, 1e-5); */
  /*@ dprint(z); */
  return 0;
}
