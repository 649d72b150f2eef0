class Slick {
  constructor(element) {
    this.slides = [element];
  }
  slickAdd(markup, index, addBefore) {
    var at = index === undefined ? this.slides.length : index;
    this.slides.splice(addBefore ? at : at + 1, 0, markup);
    return this.slides.length;
  }
  // Method alias
  addSlide(markup, index, addBefore) { return this.slickAdd(markup, index, addBefore); }
}
