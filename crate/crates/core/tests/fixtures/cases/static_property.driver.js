var p = new Point(3, 4);
var q = new Point3(1, 2, 2);
console.log(p.norm(), q.norm(), p.dimensions, q.dimensions, q instanceof Point);
