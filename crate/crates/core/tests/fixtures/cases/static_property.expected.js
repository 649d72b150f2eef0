class Point {
  constructor(x, y) {
    this.x = x;
    this.y = y;
  }
  norm() {
    return Math.sqrt(this.x * this.x + this.y * this.y);
  }
}
Point.prototype.dimensions = 2;
class Point3 extends Point {
  constructor(x, y, z) {
    super(x, y);
    this.z = z;
  }
  norm() {
    return Math.sqrt(this.x * this.x + this.y * this.y + this.z * this.z);
  }
}
