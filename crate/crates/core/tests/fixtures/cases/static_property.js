function Point(x, y) {
  this.x = x;
  this.y = y;
}
Point.prototype.dimensions = 2;
Point.prototype.norm = function() {
  return Math.sqrt(this.x * this.x + this.y * this.y);
};
function Point3(x, y, z) {
  Point.call(this, x, y);
  this.z = z;
}
Point3.prototype = Object.create(Point.prototype);
Point3.prototype.norm = function() {
  return Math.sqrt(this.x * this.x + this.y * this.y + this.z * this.z);
};
