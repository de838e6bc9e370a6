using Xunit;

namespace Fixtures.Redundant
{
    public class SelfEqualityTests
    {
        [Fact]
        public void ComparesValueWithItself()
        {
            var box = new Box();
            var width = box.Measure();
            Assert.Equal(width, width);
        }
    }
}
